#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <vector>

#include "check_util.hpp"

namespace qbessel {

namespace {

using RParam = QParam<double>;

// (q^{1+y-x};q)_∞ 1phi1(q^{1+N+y-x-z}; q^{1+y-x}; q, q^{1+z-x}). For z < x the
// argument exceeds 1 and the series cancels badly, so the equivalent form
//   (-1)^{x-z} q^{(x-z)(1+2y-x-z)/2} (q^{1+N-x};q)_{x-z}
//     (q^{1+y-z};q)_∞ 1phi1(q^{1+N+y-x-z}; q^{1+y-z}; q, q^{1+x-z})
// is summed instead.
SeriesResult<double> kernel_bracket(long long n, long long x, long long y, long long z, const QBase& q,
                                    const TruncationPolicy& policy) {
  const double qv = q.value();
  const auto a = RParam::power(static_cast<double>(1 + n + y - x - z), qv);
  if (z >= x) {
    return phi11_regularized<double>(a, RParam::power(static_cast<double>(1 + y - x), qv), q,
                                     q.pow(static_cast<double>(1 + z - x)), policy);
  }
  const long long d = x - z;
  auto s = phi11_regularized<double>(a, RParam::power(static_cast<double>(1 + y - z), qv), q,
                                     q.pow(static_cast<double>(1 + d)), policy);
  const double pre = (d % 2 == 0 ? 1.0 : -1.0) *
                     q.pow(0.5 * static_cast<double>(d) * static_cast<double>(1 + 2 * y - x - z)) *
                     qpoch_pow(static_cast<double>(1 + n - x), qv, PochIndex(d));
  s.value *= pre;
  s.tail_bound *= std::abs(pre);
  return s;
}

// Bound on |1/p_true - 1/p| / |1/p| for a truncated infinite product.
double relative_inverse_error(const InfiniteProduct<double>& p) {
  const double r = p.tail_bound / std::abs(p.value);
  return r < 1 ? r / (1 - r) : std::numeric_limits<double>::infinity();
}

}  // namespace

KernelValue kernel_delta(double nu, long long x, long long y, long long z, const QBase& q,
                         const TruncationPolicy& policy) {
  if (!(nu > 0)) throw DomainError("kernel_delta: need nu > 0");
  policy.validate();
  const double qv = q.value();
  CompensatedSum<double> sum;
  // relative rule: kernel values span many decades and symmetry is relative
  detail::StallTracker<double> stall(policy.eps_term, policy.stall_window, 0.0);
  double inner_tail = 0;
  double last = 0;
  double previous = 0;
  KernelValue out;
  const long long n0 = std::max(x, z);
  for (long long n = n0;; ++n) {
    if (n - n0 >= policy.max_terms) throw BudgetExceeded("kernel_delta: max_terms reached");
    const double r1 = 1.0 / qpoch_pow(1.0, qv, PochIndex(n - z));
    const double r2 = detail::reciprocal_qpoch_desc(static_cast<double>(n), qv, x);
    const auto p3 = qpochhammer_infinite(RParam::power(static_cast<double>(n + 1), qv), qv, policy);
    const auto p4 = qpochhammer_infinite(RParam::power(static_cast<double>(1 + n + y - x - z), qv), qv, policy);
    const double r3 = p3.value == 0 ? 0.0 : 1.0 / p3.value;
    const double r4 = p4.value == 0 ? 0.0 : 1.0 / p4.value;
    const double rest = r1 * r2 * r3 * r4;
    ++out.n_terms;
    if (rest == 0) {
      stall.reset();
      continue;
    }
    const auto br = kernel_bracket(n, x, y, z, q, policy);
    const double weight =
        rest * q.pow(nu * static_cast<double>(n - x) + static_cast<double>(1 + y - x) * static_cast<double>(z - x));
    const double term = br.value * br.value * weight;
    if (!std::isfinite(term)) throw OverflowError("kernel_delta: non-finite term");
    sum += term;
    inner_tail += (2 * std::abs(br.value) + br.tail_bound) * br.tail_bound * std::abs(weight);
    // truncated (q^{n+1};q)_∞ and (q^{1+n+y-x-z};q)_∞ perturb 1/p by ~tail/|p|
    inner_tail += std::abs(term) * (relative_inverse_error(p3) + relative_inverse_error(p4));
    previous = last;
    last = std::abs(term);
    stall.observe(last, std::abs(sum.value()));
    if (stall.stalled()) {
      const double tail = detail::geometric_tail(last, previous, q.pow(nu));
      if (std::isfinite(tail)) {
        const auto qq = qpochhammer_infinite(RParam::power(1.0, qv), qv, policy);
        const double pref = -std::expm1(nu * q.log_q()) / qq.value;
        out.value = pref * sum.value();
        out.tail_bound = pref * (tail + inner_tail) + std::abs(out.value) * relative_inverse_error(qq);
        return out;
      }
    }
  }
}

double weighted_symmetry_residual(double nu, double q, long long e1, double d1, long long e2, double d2) {
  const double lq = std::log(q);
  const double a = std::exp((nu + 1) * static_cast<double>(e1) * lq) * d1;
  const double b = std::exp((nu + 1) * static_cast<double>(e2) * lq) * d2;
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0 ? 0.0 : std::abs(a - b) / scale;
}

namespace {

void require_ranges(IntRange xr, IntRange yr, IntRange zr) {
  if (xr.size() < 1 || yr.size() < 1 || zr.size() < 1) throw DomainError("kernel_table: empty range");
}

std::size_t grid_index(const KernelTable& t, long long x, long long y, long long z) {
  return static_cast<std::size_t>(((x - t.x_range.lo) * t.y_range.size() + (y - t.y_range.lo)) * t.z_range.size() +
                                  (z - t.z_range.lo));
}

KernelTable make_table(double nu, IntRange xr, IntRange yr, IntRange zr, const QBase& q) {
  require_ranges(xr, yr, zr);
  KernelTable t;
  t.nu = nu;
  t.q = q.value();
  t.x_range = xr;
  t.y_range = yr;
  t.z_range = zr;
  t.grid.resize(static_cast<std::size_t>(xr.size() * yr.size() * zr.size()));
  std::size_t i = 0;
  for (long long x = xr.lo; x <= xr.hi; ++x) {
    for (long long y = yr.lo; y <= yr.hi; ++y) {
      for (long long z = zr.lo; z <= zr.hi; ++z) {
        t.grid[i].x = x;
        t.grid[i].y = y;
        t.grid[i].z = z;
        ++i;
      }
    }
  }
  return t;
}

// Residuals of q^{(ν+1)(x+y)} Δ against the (z, y, x) and (y, x, z) orderings
// where those lie in the grid.
void summarize(KernelTable& t) {
  t.symmetry_residual_max = 0;
  t.min_value = std::numeric_limits<double>::infinity();
  for (auto& e : t.grid) {
    double worst = 0;
    if (t.x_range.contains(e.z) && t.z_range.contains(e.x)) {
      const auto& o = t.grid[grid_index(t, e.z, e.y, e.x)];
      worst = std::max(worst, weighted_symmetry_residual(t.nu, t.q, e.x + e.y, e.delta, o.x + o.y, o.delta));
    }
    if (t.x_range.contains(e.y) && t.y_range.contains(e.x)) {
      const auto& o = t.grid[grid_index(t, e.y, e.x, e.z)];
      worst = std::max(worst, weighted_symmetry_residual(t.nu, t.q, 0, e.delta, 0, o.delta));
    }
    e.sym_residual = worst;
    t.symmetry_residual_max = std::max(t.symmetry_residual_max, worst);
    t.min_value = std::min(t.min_value, e.delta);
  }
}

void fill_entry(KernelEntry& e, double nu, const QBase& q, const TruncationPolicy& policy, long long& terms) {
  const KernelValue v = kernel_delta(nu, e.x, e.y, e.z, q, policy);
  e.delta = v.value;
  e.tail_bound = v.tail_bound;
  terms = v.n_terms;
}

}  // namespace

KernelTable kernel_table_serial(double nu, IntRange xr, IntRange yr, IntRange zr, const QBase& q,
                                const TruncationPolicy& policy) {
  KernelTable t = make_table(nu, xr, yr, zr, q);
  for (auto& e : t.grid) {
    long long terms = 0;
    fill_entry(e, nu, q, policy, terms);
    t.n_sum_terms += terms;
  }
  summarize(t);
  return t;
}

KernelTable kernel_table(double nu, IntRange xr, IntRange yr, IntRange zr, const QBase& q,
                         const TruncationPolicy& policy) {
  KernelTable t = make_table(nu, xr, yr, zr, q);
  const long long n = static_cast<long long>(t.grid.size());
  std::vector<long long> terms(t.grid.size(), 0);
  std::vector<std::exception_ptr> errors(t.grid.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    try {
      fill_entry(t.grid[static_cast<std::size_t>(i)], nu, q, policy, terms[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  for (long long v : terms) t.n_sum_terms += v;
  summarize(t);
  return t;
}

IdentityReport product_expand(double nu, long long x, long long y, const QBase& q, long long z_lo, long long z_hi,
                              const TruncationPolicy& policy, double tol) {
  if (z_lo > z_hi) throw DomainError("product_expand: need z_lo <= z_hi");
  if (!(nu > 0)) throw DomainError("product_expand: need nu > 0");
  const auto jx = little_q_bessel_j<double>(nu, q.pow(static_cast<double>(x)), q, policy);
  const auto jy = little_q_bessel_j<double>(nu, q.pow(static_cast<double>(y)), q, policy);
  CompensatedSum<double> sum;
  double tail = 0;
  std::vector<double> mags;
  for (long long z = z_lo; z <= z_hi; ++z) {
    const KernelValue d = kernel_delta(nu, x, y, z, q, policy);
    const auto jz = little_q_bessel_j<double>(nu, q.pow(static_cast<double>(z)), q, policy);
    const double term = d.value * jz.value;
    sum += term;
    tail += d.tail_bound * std::abs(jz.value) + std::abs(d.value) * jz.tail_bound;
    mags.push_back(std::abs(term));
  }
  // Bilateral tail: geometric continuation beyond each end of the range.
  if (mags.size() >= 2) {
    tail += detail::geometric_tail(mags.front(), mags[1]);
    tail += detail::geometric_tail(mags.back(), mags[mags.size() - 2]);
  } else {
    tail = std::numeric_limits<double>::infinity();
  }
  IdentityReport r;
  r.id = IdentityId::ProductFormula52;
  r.params = {{"q", q.value()},
              {"nu", nu},
              {"x", static_cast<double>(x)},
              {"y", static_cast<double>(y)},
              {"z_lo", static_cast<double>(z_lo)},
              {"z_hi", static_cast<double>(z_hi)}};
  r.lhs = jx.value * jy.value;
  r.rhs = sum.value();
  r.tail_budget = tail + std::abs(jx.value) * jy.tail_bound + jx.tail_bound * std::abs(jy.value);
  finalize_report(r, tol);
  return r;
}

namespace detail {

namespace {

// variant 0: q^{(ν+1)(x+y)} Δ(x,y,z), invariant under every permutation.
// variant 1: the weight q^{(ν+1)x} on both orderings (literal form); it only
// agrees for the x <-> z swap since Δ itself is symmetric in x <-> y.
IdentityReport kernel_symmetry(Params& p, const TruncationPolicy& policy, double tol) {
  const QBase q = p.qbase();
  const double nu = p.real("nu");
  const long long x = p.integer("x");
  const long long y = p.integer("y");
  const long long z = p.integer("z");
  const long long swap = p.integer_or("swap", 0);
  const long long variant = p.integer_or("variant", 0);
  require(swap == 0 || swap == 1, "kernel_symmetry: swap must be 0 (x<->z) or 1 (x<->y)");
  require(variant == 0 || variant == 1, "variant must be 0 or 1");
  const long long x2 = swap == 0 ? z : y;
  const long long y2 = swap == 0 ? y : x;
  const long long z2 = swap == 0 ? x : z;
  const KernelValue a = kernel_delta(nu, x, y, z, q, policy);
  const KernelValue b = kernel_delta(nu, x2, y2, z2, q, policy);
  const double ea = variant == 0 ? static_cast<double>(x + y) : static_cast<double>(x);
  const double eb = variant == 0 ? static_cast<double>(x2 + y2) : static_cast<double>(x2);
  const double wa = q.pow((nu + 1) * ea);
  const double wb = q.pow((nu + 1) * eb);
  IdentityReport r;
  r.lhs = wa * a.value;
  r.rhs = wb * b.value;
  r.tail_budget = wa * a.tail_bound + wb * b.tail_bound;
  finalize_report(r, tol);
  return r;
}

// Δ >= 0, reported as the bound 0 - Δ <= 0.
IdentityReport kernel_positivity(Params& p, const TruncationPolicy& policy, double tol) {
  const QBase q = p.qbase();
  const KernelValue d = kernel_delta(p.real("nu"), p.integer("x"), p.integer("y"), p.integer("z"), q, policy);
  IdentityReport r;
  r.lhs = -d.value;
  r.rhs = 0.0;
  r.tail_budget = d.tail_bound;
  finalize_bound_report(r, tol);
  return r;
}

IdentityReport product_formula(Params& p, const TruncationPolicy& policy, double tol) {
  const QBase q = p.qbase();
  const double nu = p.real("nu");
  const long long x = p.integer("x");
  const long long y = p.integer("y");
  const long long z_lo = p.integer_or("z_lo", std::min(x, y) - 8);
  if (p.has("z_hi")) return product_expand(nu, x, y, q, z_lo, p.integer("z_hi"), policy, tol);
  // Without an explicit upper end, widen until the estimated tail is negligible;
  // the z-terms decay roughly like q^{(ν+1/2)z}, slowly for small ν.
  long long z_hi = std::max(x, y) + 14;
  IdentityReport r = product_expand(nu, x, y, q, z_lo, z_hi, policy, tol);
  while (r.tail_budget > policy.eps_tail && z_hi < std::max(x, y) + 400) {
    z_hi += 8;
    r = product_expand(nu, x, y, q, z_lo, z_hi, policy, tol);
  }
  return r;
}

// Product formula for 1phi1 in its literal form, with the x-sum cut off below at x_lo.
IdentityReport prop51(Params& p, const TruncationPolicy& policy, double tol) {
  const QBase q = p.qbase();
  const double qv = q.value();
  const long long m = p.integer("m");
  const long long z = p.integer("z");
  const long long k = p.integer("k");
  const double t = p.real("t");
  const long long y = p.integer("y");
  const double nu = p.real("nu");
  const long long x_lo = p.integer_or("x_lo", z + k - 6);
  const long long rows_max = p.integer_or("rows_max", 400);
  require(nu > 0, "prop51: need nu > 0");
  require(z >= 0 && k >= 0, "prop51: need z, k >= 0");
  require(t > 0 && t * qv < 1, "prop51: need 0 < t < 1/q");
  require(x_lo <= z + k, "prop51: need x_lo <= z + k");
  require(rows_max >= 1, "rows_max must be positive");

  const double zm = static_cast<double>(z - m);
  const auto j1 = little_q_bessel_j<double>(nu, q.pow(zm), q, policy);
  const auto j2 = little_q_bessel_j<double>(nu, t * q.pow(zm), q, policy);
  const double tq_inf = qpochhammer_infinite<double>(RParam(t * qv), qv, policy).value;
  const double pref = -std::expm1(nu * q.log_q()) * tq_inf / qpoch_pow(1.0, qv, kInfinity, policy);

  CompensatedSum<double> sum;
  double inner_tail = 0;
  double last = 0;
  double previous = 0;
  int quiet = 0;
  double outer_tail = std::numeric_limits<double>::infinity();
  const double scale = std::max(std::abs(j1.value * j2.value), 1.0);
  long long rows = 0;
  bool diverged = false;
  for (long long n = z + k; n < z + k + rows_max; ++n) {
    const double nd = static_cast<double>(n);
    CompensatedSum<double> row;
    double row_abs = 0;
    double row_tail = 0;
    try {
      const double radicand = qpoch_desc(nd, qv, PochIndex(z + k)) *
                              qpoch_desc(nd - static_cast<double>(k), qv, PochIndex(z)) *
                              qpoch_pow(nd + 1, qv, kInfinity, policy) *
                              qpoch_pow(nd - static_cast<double>(k) + 1, qv, kInfinity, policy);
      const double root = checked_sqrt(radicand, "prop51");
      for (long long x = x_lo; x <= n; ++x) {
        const double xd = static_cast<double>(x);
        const double coef = qpochhammer<double>(RParam(t * qv), qv, PochIndex(n - x)) /
                            qpoch_pow(1.0, qv, PochIndex(n - x)) *
                            q.pow(nu * static_cast<double>(n - z - k) +
                                  static_cast<double>(x - z) * static_cast<double>(1 + y - x)) /
                            root;
        const auto f1 = phi11<double>(RParam(t * q.pow(1 + nd - xd - static_cast<double>(k))), RParam(t * qv), q,
                                      q.pow(1 + xd - static_cast<double>(z)), policy);
        const auto f2 = phi11<double>(RParam(t * q.pow(1 + nd - xd)), RParam(t * qv), q,
                                      q.pow(1 + xd - static_cast<double>(z + k)), policy);
        const auto f3 = little_q_bessel_j<double>(nu, q.pow(xd - static_cast<double>(k + m)), q, policy);
        const double term = coef * f1.value * f2.value * f3.value;
        row += term;
        row_abs += std::abs(term);
        row_tail += std::abs(coef) * (f1.tail_bound * std::abs(f2.value * f3.value) +
                                      std::abs(f1.value) * f2.tail_bound * std::abs(f3.value) +
                                      std::abs(f1.value * f2.value) * f3.tail_bound);
      }
    } catch (const QError&) {
      diverged = true;
      break;
    }
    // The x = N terms carry q^{-(N-z)(N-y-1)}; once a row overflows the
    // partial sums cannot settle and the last finite one is reported.
    if (!std::isfinite(row_abs) || !std::isfinite(row_tail)) {
      diverged = true;
      break;
    }
    sum += row.value();
    inner_tail += row_tail;
    rows = n - (z + k) + 1;
    previous = last;
    last = row_abs;
    quiet = pref * row_abs < policy.eps_tail * scale ? quiet + 1 : 0;
    if (quiet >= policy.stall_window) {
      outer_tail = geometric_tail(last, previous);
      if (std::isfinite(outer_tail)) break;
    }
  }
  IdentityReport r;
  r.lhs = j1.value * j2.value;
  r.rhs = pref * sum.value();
  r.tail_budget = pref * (outer_tail + inner_tail) + std::abs(j1.value) * j2.tail_bound +
                  j1.tail_bound * std::abs(j2.value);
  r.params["rows"] = static_cast<double>(rows);
  r.params["diverged"] = diverged ? 1.0 : 0.0;
  finalize_report(r, tol);
  return r;
}

}  // namespace

IdentityReport check_product_family(IdentityId id, Params& p, const TruncationPolicy& policy, double tol) {
  switch (id) {
    case IdentityId::Prop51: return prop51(p, policy, tol);
    case IdentityId::ProductFormula52: return product_formula(p, policy, tol);
    case IdentityId::KernelSymmetry: return kernel_symmetry(p, policy, tol);
    case IdentityId::KernelPositivity: return kernel_positivity(p, policy, tol);
    default: throw DomainError("check_product_family: unsupported identity");
  }
}

}  // namespace detail

}  // namespace qbessel
