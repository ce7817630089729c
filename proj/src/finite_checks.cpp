// Checks whose two sides are finite sums or single rapidly convergent series:
// the 1phi1 relations, orthogonality, limit transitions, the finite addition
// formulas and the pointwise bounds.

#include <cmath>
#include <limits>

#include "check_util.hpp"

namespace qbessel::detail {

namespace {

using CParam = QParam<Complex>;
using RParam = QParam<double>;

Complex complex_param(Params& p, const std::string& key) {
  return {p.real(key), p.real_or(key + "_im", 0.0)};
}

double binom2(long long n) { return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1); }

void require_t(double t, double qv) { require(t > 0 && t * qv < 1, "need 0 < t < 1/q"); }

// ---------------------------------------------------------------- j expansion

IdentityReport prop21(Params& p, const TruncationPolicy& policy, double tol) {
  const QBase q = p.qbase();
  const long long n = p.integer("n");
  const Complex a = complex_param(p, "a");
  const Complex z = complex_param(p, "z");
  const bool bound = p.integer_or("bound", 0) != 0;
  IdentityReport r;
  const auto lhs = phi11_regularized<Complex>(CParam(a), CParam::power(static_cast<double>(1 - n), q.value()), q, z,
                                              policy);
  if (bound) {
    require(n >= 0, "prop21 bound: need n >= 0");
    const double qv = q.value();
    const double prod = qpochhammer_infinite<double>(RParam(-qv), qv, policy).value *
                        qpochhammer_infinite<double>(RParam(-std::abs(a)), qv, policy).value *
                        qpochhammer_infinite<double>(RParam(-std::abs(z)), qv, policy).value;
    r.lhs = std::abs(lhs.value);
    r.rhs = std::pow(std::abs(z), static_cast<double>(n)) * q.pow(binom2(n)) * prod;
    r.tail_budget = lhs.tail_bound;
    finalize_bound_report(r, tol);
    return r;
  }
  const auto rhs = phi11_shifted<Complex>(n, CParam(a), z, q, policy);
  r.lhs = lhs.value;
  r.rhs = rhs.value;
  r.tail_budget = lhs.tail_bound + rhs.tail_bound;
  finalize_report(r, tol);
  return r;
}

// (w;q)_∞ 1phi1(a; w; q, z) = (z;q)_∞ 1phi1(az/w; z; q, w)
IdentityReport transform27(Params& p, const TruncationPolicy& policy, double tol) {
  const QBase q = p.qbase();
  const double qv = q.value();
  const Complex a = complex_param(p, "a");
  const Complex w = complex_param(p, "w");
  const Complex z = complex_param(p, "z");
  require(w != Complex(0), "transform27: need w != 0");
  const auto pw = qpochhammer_infinite<Complex>(CParam(w), qv, policy);
  const auto pz = qpochhammer_infinite<Complex>(CParam(z), qv, policy);
  const auto left = phi11<Complex>(CParam(a), CParam(w), q, z, policy);
  const auto right = phi11<Complex>(CParam(a * z / w), CParam(z), q, w, policy);
  IdentityReport r;
  r.lhs = pw.value * left.value;
  r.rhs = pz.value * right.value;
  r.tail_budget = std::abs(pw.value) * left.tail_bound + pw.tail_bound * std::abs(left.value) +
                  std::abs(pz.value) * right.tail_bound + pz.tail_bound * std::abs(right.value);
  finalize_report(r, tol);
  return r;
}

// ------------------------------------------------------------ orthogonality

IdentityReport jacobi_orth(Params& p, const TruncationPolicy& policy, double tol) {
  const QBase q = p.qbase();
  const double qv = q.value();
  const long long m = p.integer("m");
  const long long n = p.integer("n");
  const double alpha = p.real("alpha");
  const double beta = p.real("beta");
  require(m >= 0 && n >= 0, "jacobi_orth: need m, n >= 0");
  require(alpha > -1 && beta > -1, "jacobi_orth: need alpha, beta > -1");

  CompensatedSum<double> sum;
  StallTracker<double> stall(policy.eps_term, policy.stall_window);
  double last = 0;
  double previous = 0;
  double tail = std::numeric_limits<double>::infinity();
  for (long long k = 0;; ++k) {
    if (k >= policy.max_terms) throw BudgetExceeded("jacobi_orth: max_terms reached");
    const double x = q.pow(static_cast<double>(k));
    const double weight = q.pow(static_cast<double>(k) * (alpha + 1)) *
                          qpoch_pow(static_cast<double>(k + 1), qv, kInfinity, policy) /
                          qpoch_pow(beta + static_cast<double>(k + 1), qv, kInfinity, policy);
    const double term = little_q_jacobi<double>(m, x, alpha, beta, q) * little_q_jacobi<double>(n, x, alpha, beta, q) *
                        weight;
    sum += term;
    previous = last;
    last = std::abs(term);
    stall.observe(last, std::abs(sum.value()));
    if (stall.stalled()) {
      tail = geometric_tail(last, previous, q.pow(alpha + 1));
      if (std::isfinite(tail)) break;
    }
  }
  const double pref = qpoch_pow(alpha + 1, qv, kInfinity, policy) * qpoch_pow(beta + 1, qv, kInfinity, policy) /
                      (qpoch_pow(alpha + beta + 2, qv, kInfinity, policy) * qpoch_pow(1.0, qv, kInfinity, policy));
  IdentityReport r;
  r.lhs = pref * sum.value();
  if (m == n) {
    const double nd = static_cast<double>(n);
    r.rhs = q.pow(nd * (alpha + 1)) * -std::expm1((alpha + beta + 1) * q.log_q()) *
            qpoch_pow(beta + 1, qv, PochIndex(n)) * qpoch_pow(1.0, qv, PochIndex(n)) /
            (-std::expm1((alpha + beta + 2 * nd + 1) * q.log_q()) * qpoch_pow(alpha + 1, qv, PochIndex(n)) *
             qpoch_pow(alpha + beta + 1, qv, PochIndex(n)));
  }
  r.tail_budget = pref * tail;
  finalize_report(r, tol);
  return r;
}

IdentityReport krawtchouk_orth(Params& p, double tol) {
  const QBase q = p.qbase();
  const double qv = q.value();
  const long long n = p.integer("n");
  const long long m = p.integer("m");
  const double t = p.real("t");
  const long long big_n = p.integer("N");
  require(big_n >= 0 && n >= 0 && m >= 0 && n <= big_n && m <= big_n, "krawtchouk_orth: need 0 <= n, m <= N");
  require_t(t, qv);
  const double tq = t * qv;
  CompensatedSum<double> sum;
  for (long long x = 0; x <= big_n; ++x) {
    const double weight = qpochhammer<double>(RParam(tq), qv, PochIndex(x)) * qpoch_pow(1.0, qv, PochIndex(big_n)) /
                          (qpoch_pow(1.0, qv, PochIndex(x)) * qpoch_pow(1.0, qv, PochIndex(big_n - x))) *
                          std::pow(tq, -static_cast<double>(x));
    const RParam arg = RParam::power(-static_cast<double>(x), qv);
    sum += weight * affine_q_krawtchouk<double>(n, arg, t, big_n, q) * affine_q_krawtchouk<double>(m, arg, t, big_n, q);
  }
  IdentityReport r;
  r.lhs = sum.value();
  if (n == m) {
    r.rhs = std::pow(tq, static_cast<double>(n - big_n)) * qpoch_pow(1.0, qv, PochIndex(n)) *
            qpoch_pow(1.0, qv, PochIndex(big_n - n)) /
            (qpochhammer<double>(RParam(tq), qv, PochIndex(n)) * qpoch_pow(1.0, qv, PochIndex(big_n)));
  }
  finalize_report(r, tol);
  return r;
}

// ------------------------------------------------------------------ limits

// p_n(q^n x; q^α, q^β; q) with the 2phi1 argument exactly q^n x, i.e. the
// library polynomial evaluated at q^{n-1} x.
IdentityReport limit_jacobi_bessel(Params& p, const TruncationPolicy& policy, double tol) {
  const QBase q = p.qbase();
  const long long n = p.integer("n");
  const double x = p.real("x");
  const double alpha = p.real("alpha");
  const double beta = p.real("beta");
  require(n >= 0, "limit_jacobi_bessel: need n >= 0");
  require(alpha > -1 && beta > -1, "limit_jacobi_bessel: need alpha, beta > -1");
  const auto j = little_q_bessel_j<double>(alpha, x, q, policy);
  IdentityReport r;
  r.lhs = little_q_jacobi<double>(n, q.pow(static_cast<double>(n - 1)) * x, alpha, beta, q);
  r.rhs = j.value;
  r.tail_budget = j.tail_bound;
  finalize_report(r, tol);
  return r;
}

// variant 0: (q^{N+m}; q^{-1})_{z+m} K_{z+m}(q^{x-N}; t, N+m; q)
// variant 1: the same with (q^{-N-m}; q^{-1})_{z+m}
IdentityReport limit_krawtchouk_big_bessel(Params& p, const TruncationPolicy& policy, double tol) {
  const QBase q = p.qbase();
  const double qv = q.value();
  const long long m = p.integer("m");
  const long long z = p.integer("z");
  const long long big_n = p.integer("N");
  const double t = p.real("t");
  const double x = p.real("x");
  const long long variant = p.integer_or("variant", 0);
  require(m >= 0 && z >= 0 && z <= big_n, "limit_krawtchouk_big_bessel: need m >= 0 and 0 <= z <= N");
  require(variant == 0 || variant == 1, "variant must be 0 or 1");
  require_t(t, qv);
  const double nm = static_cast<double>(big_n + m);
  const double factor = qpoch_desc(variant == 0 ? nm : -nm, qv, PochIndex(z + m));
  const double k = affine_q_krawtchouk<double>(z + m, RParam::power(x - static_cast<double>(big_n), qv), t, big_n + m, q);
  const auto target = big_q_bessel<double>(-q.pow(static_cast<double>(big_n - z + 1)),
                                           q.pow(x - static_cast<double>(big_n) - 1) / t, RParam(t * qv), q, policy);
  IdentityReport r;
  r.lhs = factor * k;
  r.rhs = target.value;
  r.tail_budget = target.tail_bound;
  finalize_report(r, tol);
  return r;
}

// ----------------------------------------------------- finite addition formulas

double khat_or_zero(long long z, double x_arg, double t, long long big_n, const QBase& q) {
  if (z < 0 || z > big_n) return 0;
  return krawtchouk_hat<double>(z, RParam(x_arg), t, big_n, q);
}

/// sqrt(a * b) with an exact zero winning over a negative co-factor.
double joint_sqrt(double a, double b, const char* what) {
  if (a == 0 || b == 0) return 0;
  return checked_sqrt(a * b, what);
}

struct AdditionArgs {
  long long l;
  double nu;
  double t;
  long long z;
  long long big_n;
  double x;
};

AdditionArgs addition_args(Params& p, const QBase& q, bool allow_m) {
  AdditionArgs a{};
  a.l = p.integer("l");
  if (allow_m && p.has("m")) {
    require(p.integer("m") == a.l, "floris_koelink_addition: c_{l,m;r,s} is only available in closed form for m = l");
  }
  a.nu = p.real("nu");
  a.t = p.real("t");
  a.z = p.integer("z");
  a.big_n = p.integer("N");
  a.x = p.real("x");
  require(a.l >= 0 && a.z >= 0 && a.z + a.l <= a.big_n, "addition formula: need l, z >= 0 and z + l <= N");
  require(a.nu > 0, "addition formula: need nu > 0");
  require_t(a.t, q.value());
  return a;
}

// r_{l,l}(x) K̂_z(x q^{-N}) = Σ_{r,s<=l} c_{l,l,r,s} (-1)^{r-s} t^{(r+s)/2} q^{(r-s)/2} q^{z(r+s)}
//     r_{l-r,l-s}^{(ν+r+s)}(q^z) r_{l-r,l-s}^{(ν+r+s)}(t q^z) r_{r,s}^{(ν-1)}(q^{N-z}) K̂_{z+s-r}(x q^{-N})
IdentityReport floris_koelink(Params& p, double tol) {
  const QBase q = p.qbase();
  const double qv = q.value();
  const AdditionArgs a = addition_args(p, q, true);
  const double x_arg = a.x * q.pow(-static_cast<double>(a.big_n));
  const double zq = static_cast<double>(a.z);
  const RParam qz = RParam::power(zq, qv);
  const RParam tqz(a.t * q.pow(zq));
  const RParam qnz = RParam::power(static_cast<double>(a.big_n - a.z), qv);

  CompensatedSum<double> sum;
  for (long long r = 0; r <= a.l; ++r) {
    for (long long s = 0; s <= a.l; ++s) {
      const long long shifted = a.z + s - r;
      if (shifted < 0 || shifted > a.big_n) continue;
      const double order = a.nu + static_cast<double>(r + s);
      const auto left = r_poly_parts(a.l - r, a.l - s, order, qz, q);
      const auto right = r_poly_parts(a.l - r, a.l - s, order, tqz, q);
      const double radical = joint_sqrt(left.radicand, right.radicand, "floris_koelink_addition");
      if (radical == 0) continue;
      const double rs = static_cast<double>(r + s);
      const double sign = (r - s) % 2 == 0 ? 1.0 : -1.0;
      sum += c_addition(a.l, r, s, a.nu, q) * sign * std::pow(a.t, rs / 2) * q.pow(static_cast<double>(r - s) / 2) *
             q.pow(zq * rs) * radical * left.poly * right.poly * r_poly(r, s, a.nu - 1, qnz, q) *
             khat_or_zero(shifted, x_arg, a.t, a.big_n, q);
    }
  }
  IdentityReport rep;
  rep.lhs = r_poly(a.l, a.l, a.nu, RParam(a.x), q) * khat_or_zero(a.z, x_arg, a.t, a.big_n, q);
  rep.rhs = sum.value();
  finalize_report(rep, tol);
  return rep;
}

// p_l(x; q^ν, 1; q) K̂_z(x q^{-N}) as two triangular sums over s <= r, the first
// without the diagonal.
IdentityReport jacobi_addition(Params& p, double tol) {
  const QBase q = p.qbase();
  const double qv = q.value();
  const AdditionArgs a = addition_args(p, q, false);
  const double x_arg = a.x * q.pow(-static_cast<double>(a.big_n));
  const double zq = static_cast<double>(a.z);
  const double inv = 1.0 / qv;

  CompensatedSum<double> sum;
  for (long long r = 0; r <= a.l; ++r) {
    for (long long s = 0; s <= r; ++s) {
      const long long k = r - s;
      const double order = a.nu + static_cast<double>(r + s);
      const double kd = static_cast<double>(k);
      const double rs = static_cast<double>(r + s);
      const double common = c_addition(a.l, r, s, a.nu, q) * (k % 2 == 0 ? 1.0 : -1.0) * std::pow(a.t, rs / 2) *
                            q.pow(kd / 2) * q.pow(zq * rs);
      if (k > 0 && a.z - k >= 0) {
        // (q^z, t q^z; q^{-1})_k (q^{N-z+1}; q)_k
        const double rad_a = qpochhammer<double>(RParam::power(-zq, inv), inv, PochIndex(k));
        const double rad_b = qpochhammer<double>(RParam(a.t * q.pow(zq)), inv, PochIndex(k)) *
                             qpoch_pow(static_cast<double>(a.big_n - a.z + 1), qv, PochIndex(k));
        const double radical = joint_sqrt(rad_a, rad_b, "jacobi_addition");
        if (radical != 0) {
          const double arg = q.pow(zq - kd);
          sum += common * radical * little_q_jacobi<double>(a.l - r, arg, order, kd, q) *
                 little_q_jacobi<double>(a.l - r, a.t * arg, order, kd, q) *
                 little_q_jacobi<double>(s, q.pow(static_cast<double>(a.big_n - a.z)), a.nu - 1, kd, q) *
                 khat_or_zero(a.z - k, x_arg, a.t, a.big_n, q);
        }
      }
      if (a.z + k <= a.big_n) {
        // (q^{z+1}, t q^{z+1}; q)_k (q^{N-z}; q^{-1})_k
        const double rad_a = qpoch_pow(zq + 1, qv, PochIndex(k)) *
                             qpochhammer<double>(RParam(a.t * q.pow(zq + 1)), qv, PochIndex(k));
        const double rad_b = qpoch_desc(static_cast<double>(a.big_n - a.z), qv, PochIndex(k));
        const double radical = joint_sqrt(rad_a, rad_b, "jacobi_addition");
        if (radical != 0) {
          const double arg = q.pow(zq);
          sum += common * q.pow(static_cast<double>(r * r - s * s)) * radical *
                 little_q_jacobi<double>(a.l - r, arg, order, kd, q) *
                 little_q_jacobi<double>(a.l - r, a.t * arg, order, kd, q) *
                 little_q_jacobi<double>(s, q.pow(static_cast<double>(a.big_n - a.z - k)), a.nu - 1, kd, q) *
                 khat_or_zero(a.z + k, x_arg, a.t, a.big_n, q);
        }
      }
    }
  }
  IdentityReport rep;
  rep.lhs = little_q_jacobi<double>(a.l, a.x, a.nu, 0.0, q) * khat_or_zero(a.z, x_arg, a.t, a.big_n, q);
  rep.rhs = sum.value();
  finalize_report(rep, tol);
  return rep;
}

// ------------------------------------------------------------------ bounds

// (q^α;q)_∞ <= (q^α;q)_n <= (-q^α;q)_∞; the report carries the larger violation.
IdentityReport bound24(Params& p, const TruncationPolicy& policy, double tol) {
  const QBase q = p.qbase();
  const double qv = q.value();
  const double alpha = p.real("alpha");
  const long long n = p.integer("n");
  require(alpha > 0 && n >= 0, "bound24: need alpha > 0 and n >= 0");
  const double mid = qpoch_pow(alpha, qv, PochIndex(n));
  const auto lo = qpochhammer_infinite<double>(RParam::power(alpha, qv), qv, policy);
  const auto hi = qpochhammer_infinite<double>(RParam(-q.pow(alpha)), qv, policy);
  IdentityReport r;
  r.tail_budget = lo.tail_bound + hi.tail_bound;
  if (lo.value - mid > mid - hi.value) {
    r.lhs = lo.value;
    r.rhs = mid;
  } else {
    r.lhs = mid;
    r.rhs = hi.value;
  }
  finalize_bound_report(r, tol);
  return r;
}

// |(q^{-m};q)_n q^{nm}| <= q^{n(n-1)/2}
IdentityReport bound25(Params& p, double tol) {
  const QBase q = p.qbase();
  const long long m = p.integer("m");
  const long long n = p.integer("n");
  require(m >= 0 && n >= 0, "bound25: need m, n >= 0");
  IdentityReport r;
  r.lhs = std::abs(qpoch_pow(-static_cast<double>(m), q.value(), PochIndex(n)) *
                   q.pow(static_cast<double>(n) * static_cast<double>(m)));
  r.rhs = q.pow(binom2(n));
  finalize_bound_report(r, tol);
  return r;
}

IdentityReport bound_lemma42(Params& p, const TruncationPolicy& policy, double tol) {
  const QBase q = p.qbase();
  const double qv = q.value();
  const double nu = p.real("nu");
  const long long big_n = p.integer("N");
  const long long z = p.integer("z");
  const long long rr = p.integer("r");
  const long long s = p.integer("s");
  require(nu > 0, "bound_lemma42: need nu > 0");
  require(big_n >= 0 && z >= 0 && s >= 0 && rr >= s, "bound_lemma42: need N, z, s >= 0 and r >= s");
  const double nz = static_cast<double>(big_n - z);
  auto inf = [&](double a) { return qpochhammer_infinite<double>(RParam(a), qv, policy).value; };
  IdentityReport r;
  r.lhs = std::abs(little_q_jacobi<double>(s, q.pow(nz), nu - 1, static_cast<double>(rr - s), q));
  r.rhs = inf(-qv) * inf(-q.pow(nu)) * inf(-q.pow(-nz)) /
          (inf(qv) * inf(q.pow(nu)) * inf(q.pow(nu))) * q.pow(static_cast<double>(s) * nz - binom2(s));
  finalize_bound_report(r, tol);
  return r;
}

// |K_z(q^{x-N}; t, N; q)| <= 1phi1(-t q^{N-x+1}; tq; q, -q^{x-z+1}) / (q;q)_∞
IdentityReport bound_prop32(Params& p, const TruncationPolicy& policy, double tol) {
  const QBase q = p.qbase();
  const double qv = q.value();
  const long long z = p.integer("z");
  const long long big_n = p.integer("N");
  const double t = p.real("t");
  const double x = p.real("x");
  require(z >= 0 && z <= big_n, "bound_prop32: need 0 <= z <= N");
  require_t(t, qv);
  const double nd = static_cast<double>(big_n);
  const auto series = phi11<double>(RParam(-t * q.pow(nd - x + 1)), RParam(t * qv), q,
                                    -q.pow(x - static_cast<double>(z) + 1), policy);
  const double qq = qpoch_pow(1.0, qv, kInfinity, policy);
  IdentityReport r;
  r.lhs = std::abs(affine_q_krawtchouk<double>(z, RParam::power(x - nd, qv), t, big_n, q));
  r.rhs = series.value / qq;
  r.tail_budget = series.tail_bound / qq;
  finalize_bound_report(r, tol);
  return r;
}

}  // namespace

IdentityReport check_finite_family(IdentityId id, Params& p, const TruncationPolicy& policy, double tol) {
  switch (id) {
    case IdentityId::Prop21: return prop21(p, policy, tol);
    case IdentityId::Transform27: return transform27(p, policy, tol);
    case IdentityId::JacobiOrth: return jacobi_orth(p, policy, tol);
    case IdentityId::KrawtchoukOrth: return krawtchouk_orth(p, tol);
    case IdentityId::LimitJacobiBessel: return limit_jacobi_bessel(p, policy, tol);
    case IdentityId::LimitKrawtchoukBigBessel: return limit_krawtchouk_big_bessel(p, policy, tol);
    case IdentityId::FlorisKoelinkAddition: return floris_koelink(p, tol);
    case IdentityId::JacobiAddition: return jacobi_addition(p, tol);
    case IdentityId::Bound24: return bound24(p, policy, tol);
    case IdentityId::Bound25: return bound25(p, tol);
    case IdentityId::BoundLemma42: return bound_lemma42(p, policy, tol);
    case IdentityId::BoundProp32: return bound_prop32(p, policy, tol);
    default: throw DomainError("check_finite_family: unsupported identity");
  }
}

}  // namespace qbessel::detail
