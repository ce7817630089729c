// Addition formulas for the normalized little q-Bessel functions: the general
// form with free shift l, its l = 1 instance in terms of j_ν, and the N → ∞
// limit with t = q^μ. Each is available in the re-derived form (variant 0)
// and in its literal form (variant 1).
//
// The right-hand sides are double series over s <= r. Rows are summed until a
// row majorant (explicit prefactor times majorants of every special-function
// factor) stays below eps_tail; the remaining tail is estimated geometrically
// from the majorant ratio.

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <utility>

#include "check_util.hpp"

namespace qbessel::detail {

namespace {

using RParam = QParam<double>;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct AdditionSpec {
  IdentityId id{};
  int variant = 0;
  double nu = 0;
  double t = 0;   // t, or q^μ for the N → ∞ form
  double mu = 0;  // only for the N → ∞ form
  double x = 0;
  long long z = 0;
  long long big_n = 0;
  long long l = 0;
  bool infinite_n = false;
  long long rows_max = 400;
};

/// log of (-|w|; q)_∞ / (q^{order+1}; q)_∞, a majorant of |j_order(w)|.
class BesselMajorant {
 public:
  explicit BesselMajorant(const QBase& q) : q_(q) {}

  double log_bound(double order, double w_abs) {
    return log_neg_product(w_abs) - log_product(order + 1);
  }

 private:
  // log (q^e; q)_∞ for e > 0.
  double log_product(double e) {
    auto it = pos_.find(e);
    if (it != pos_.end()) return it->second;
    double acc = 0;
    double u = q_.pow(e);
    while (u > 1e-18) {
      acc += std::log1p(-u);
      u *= q_.value();
    }
    pos_.emplace(e, acc);
    return acc;
  }
  // log (-a; q)_∞ for a >= 0.
  double log_neg_product(double a) {
    double acc = 0;
    double u = a;
    while (u > 1e-18) {
      acc += std::log1p(u);
      u *= q_.value();
    }
    return acc;
  }

  QBase q_;
  std::map<double, double> pos_;
};

class AdditionEngine {
 public:
  AdditionEngine(const AdditionSpec& spec, const QBase& q, const TruncationPolicy& policy)
      : s_(spec), q_(q), qv_(q.value()), policy_(policy), maj_(q) {}

  IdentityReport run(double tol) {
    IdentityReport rep;
    const Side lhs = left_side();
    rep.lhs = lhs.value;
    const double scale = std::max(std::abs(lhs.value), 1.0);
    const double skip_level = std::log(policy_.eps_term * 1e-3 * scale);

    CompensatedSum<double> sum;
    double inner_tail = lhs.tail;
    double skipped_mass = 0;
    long long skipped_terms = 0;
    double last = 0;
    double previous = 0;
    int quiet_rows = 0;
    double outer_tail = std::numeric_limits<double>::infinity();
    long long rows = 0;
    bool diverged = false;
    const long long r0 = s_.variant == 1 ? 1 : 0;
    for (long long r = r0; r < r0 + s_.rows_max; ++r) {
      double row_majorant = 0;
      try {
        for (long long s = 0; s <= r; ++s) {
          for (int part = 0; part < 2; ++part) {
            if (part == 0 && s == r) continue;
            const auto term = make_term(part, r, s);
            if (!term) {
              ++skipped_terms;
              continue;
            }
            if (term->log_majorant == kNegInf) continue;
            const double mag = std::exp(term->log_majorant);
            row_majorant += mag;
            if (term->log_majorant < skip_level) {
              skipped_mass += mag;
              continue;
            }
            const Evaluated e = evaluate(*term);
            sum += e.value;
            inner_tail += e.tail;
          }
        }
      } catch (const QError&) {
        diverged = true;
        rows = r - r0;
        break;
      }
      rows = r - r0 + 1;
      if (!std::isfinite(row_majorant)) {
        diverged = true;
        break;
      }
      previous = last;
      last = row_majorant;
      quiet_rows = row_majorant < policy_.eps_tail * scale ? quiet_rows + 1 : 0;
      if (quiet_rows >= policy_.stall_window) {
        outer_tail = geometric_tail(last, previous);
        if (std::isfinite(outer_tail)) break;
      }
    }
    rep.rhs = sum.value();
    rep.tail_budget = diverged ? std::numeric_limits<double>::infinity() : outer_tail + inner_tail + skipped_mass;
    rep.params["rows"] = static_cast<double>(rows);
    rep.params["skipped_terms"] = static_cast<double>(skipped_terms);
    finalize_report(rep, tol);
    return rep;
  }

 private:
  struct Side {
    double value = 0;
    double tail = 0;
  };

  // One summand: coefficient × j_order(a1) × j_order(a2) × p_s(p_arg; q^{ν-1}, q^{r-s}) × B(b_shift).
  struct Term {
    double log_coef = 0;
    double coef_sign = 1;
    double order = 0;
    double a1 = 0;
    double a2 = 0;
    long long s = 0;
    long long beta = 0;
    double p_exp = 0;  // p_s evaluated at q^{p_exp} in the library convention
    bool has_p = true;
    long long b_shift = 0;
    double log_majorant = 0;
  };

  struct Evaluated {
    double value = 0;
    double tail = 0;
  };

  double lq() const { return q_.log_q(); }

  // (-q, -q^ν, -q^{-d}; q)_∞ / (q, q^ν, q^ν; q)_∞ q^{s d - s(s-1)/2}, a bound on |p_s(q^d; q^{ν-1}, q^{r-s})|.
  double log_jacobi_bound(long long s, double d) const {
    const double sd = static_cast<double>(s);
    return lemma_constant_ + log_neg(q_.pow(-d)) + (sd * d - 0.5 * sd * (sd - 1)) * lq();
  }

  double log_neg(double a) const {
    double acc = 0;
    for (double u = a; u > 1e-18; u *= qv_) acc += std::log1p(u);
    return acc;
  }

  // Majorant of |B(w)|: the series with every parameter replaced by minus its modulus.
  double log_b_majorant(long long w) {
    if (s_.infinite_n) return maj_.log_bound(s_.mu, q_.pow(s_.x - static_cast<double>(w) + 1));
    auto it = b_major_.find(w);
    if (it != b_major_.end()) return it->second;
    const double nd = static_cast<double>(s_.big_n);
    const auto series = phi11<double>(RParam(-s_.t * q_.pow(nd - s_.x + 1)), RParam(s_.t * qv_), q_,
                                      -q_.pow(s_.x - static_cast<double>(w) + 1), policy_);
    const double v = std::log(series.value + series.tail_bound);
    b_major_.emplace(w, v);
    return v;
  }

  SeriesResult<double> b_value(long long w) {
    auto it = b_cache_.find(w);
    if (it != b_cache_.end()) return it->second;
    const double arg = q_.pow(s_.x - static_cast<double>(w) + 1);
    SeriesResult<double> v;
    if (s_.infinite_n) {
      v = little_q_bessel_j<double>(s_.mu, arg, q_, policy_);
    } else {
      const double nd = static_cast<double>(s_.big_n);
      v = phi11<double>(RParam(s_.t * q_.pow(nd - s_.x + 1)), RParam(s_.t * qv_), q_, arg, policy_);
    }
    b_cache_.emplace(w, v);
    return v;
  }

  Side left_side() {
    // Literal general form: j_ν(q^{x-l}); derived: j_ν(q^{x-l+1}).
    const double shift = s_.variant == 1 ? 0.0 : 1.0;
    const double jexp = s_.x - static_cast<double>(s_.l) + shift;
    const auto j = little_q_bessel_j<double>(s_.nu, q_.pow(jexp), q_, policy_);
    const auto b = b_value(s_.z);
    return {j.value * b.value, std::abs(j.value) * b.tail_bound + j.tail_bound * std::abs(b.value)};
  }

  // log (q^ν;q)_r (q^ν;q)_s / ((q;q)_r (q;q)_s), and the derived extra factor
  // (1 - q^{ν+r+s}) / ((1 - q^ν) (q^{ν+1};q)_{r+s}^2).
  double log_binomial_part(long long r, long long s) const {
    const double a = qpoch_pow(s_.nu, qv_, PochIndex(r)) * qpoch_pow(s_.nu, qv_, PochIndex(s)) /
                     (qpoch_pow(1.0, qv_, PochIndex(r)) * qpoch_pow(1.0, qv_, PochIndex(s)));
    return std::log(a);
  }
  double log_derived_extra(long long r, long long s) const {
    const double rs = static_cast<double>(r + s);
    const double p = qpoch_pow(s_.nu + 1, qv_, PochIndex(r + s));
    return std::log(std::expm1((s_.nu + rs) * lq()) / std::expm1(s_.nu * lq())) - 2 * std::log(p);
  }

  std::optional<Term> make_term(int part, long long r, long long s) {
    Term t;
    t.s = s;
    t.beta = r - s;
    t.order = s_.nu + static_cast<double>(r + s);
    const double rs = static_cast<double>(r + s);
    const double rd = static_cast<double>(r);
    const double sd = static_cast<double>(s);
    const double zd = static_cast<double>(s_.z);
    const double ld = static_cast<double>(s_.l);
    const double nd = static_cast<double>(s_.big_n);
    const long long k = r - s;
    double log_coef = log_binomial_part(r, s);
    double q_exp = 0;
    double j_exp = 0;

    if (s_.id == IdentityId::AdditionNInfinity) {
      t.has_p = false;
      if (s_.variant == 0) {
        log_coef += log_derived_extra(r, s);
        q_exp = part == 0 ? rs * (zd + sd - 1) + rd + s_.mu * rd : rs * (zd + rd - 1) + sd + s_.mu * sd;
        t.b_shift = part == 0 ? s_.z + s - r : s_.z + r - s;
      } else {
        q_exp = part == 0 ? rs * (zd + sd + 1) + s_.mu * rd : rs * (zd + rd) + sd * (1 + s_.mu);
        // Literal second sum: j_μ(q^{x-z-r-s+1}), i.e. B evaluated at shift z + r + s.
        t.b_shift = part == 0 ? s_.z + s - r : s_.z + r + s;
      }
      j_exp = part == 0 ? zd + sd : zd + rd;
      t.a1 = q_.pow(j_exp);
      t.a2 = q_.pow(j_exp + s_.mu);
      t.log_coef = log_coef + q_exp * lq();
      return finish(t);
    }

    // General form with shift l (corollary43 fixes l).
    if (s_.variant == 0) {
      log_coef += log_derived_extra(r, s);
      if (part == 0) {
        q_exp = rs * (zd + sd - ld) + rd;
        log_coef += rd * std::log(s_.t) +
                    std::log(qpoch_pow(nd - zd + 1, qv_, PochIndex(k)));
        j_exp = zd + sd - ld + 1;
        t.p_exp = nd - zd;
        t.b_shift = s_.z + s - r;
      } else {
        if (k > s_.big_n - s_.z) return Term{.log_majorant = kNegInf};
        q_exp = rs * (zd + rd - ld) + sd;
        log_coef += sd * std::log(s_.t);
        j_exp = zd + rd - ld + 1;
        t.p_exp = nd - zd - static_cast<double>(k);
        t.b_shift = s_.z + r - s;
      }
    } else {
      // sqrt(X (q^N;q^{-1})_z / (q^N;q^{-1})_{z+s-r}) with X = (q^{N-z+1};q)_k or (q^{N-z};q^{-1})_k.
      const double x_part = part == 0 ? qpoch_pow(nd - zd + 1, qv_, PochIndex(k))
                                      : qpoch_desc(nd - zd, qv_, PochIndex(k));
      if (x_part == 0) return Term{.log_majorant = kNegInf};
      const double den = qpoch_desc(nd, qv_, PochIndex(s_.z + s - r));
      if (den == 0) return std::nullopt;
      const double radicand = x_part * qpoch_desc(nd, qv_, PochIndex(s_.z)) / den;
      if (!(radicand > 0)) return std::nullopt;
      log_coef += 0.5 * std::log(radicand);
      if (part == 0) {
        q_exp = rs * (zd + sd - ld + 1);
        log_coef += rd * std::log(s_.t);
        j_exp = zd + sd - ld;
        t.p_exp = nd - zd - 1;  // literal argument q^{N-z}, library convention q^{N-z-1}
        t.b_shift = s_.z + s - r;
      } else {
        q_exp = rs * (zd + rd - ld) + sd;
        log_coef += sd * std::log(s_.t);
        j_exp = zd + rd - ld;
        t.p_exp = nd - zd - static_cast<double>(k) - 1;
        t.b_shift = s_.z + r - s;
      }
    }
    t.a1 = q_.pow(j_exp);
    t.a2 = s_.t * q_.pow(j_exp);
    t.log_coef = log_coef + q_exp * lq();
    return finish(t);
  }

  Term finish(Term t) {
    t.log_majorant = t.log_coef + maj_.log_bound(t.order, std::abs(t.a1)) + maj_.log_bound(t.order, std::abs(t.a2)) +
                     log_b_majorant(t.b_shift);
    if (t.has_p) t.log_majorant += log_jacobi_bound(t.s, t.p_exp + 1);
    return t;
  }

  Evaluated evaluate(const Term& t) {
    const auto j1 = little_q_bessel_j<double>(t.order, t.a1, q_, policy_);
    const auto j2 = little_q_bessel_j<double>(t.order, t.a2, q_, policy_);
    const auto b = b_value(t.b_shift);
    const double p = t.has_p ? little_q_jacobi<double>(t.s, q_.pow(t.p_exp), s_.nu - 1, static_cast<double>(t.beta), q_)
                             : 1.0;
    const double coef = t.coef_sign * std::exp(t.log_coef);
    const double core = j1.value * j2.value * p * b.value;
    if (!std::isfinite(core)) throw OverflowError("addition formula: non-finite summand");
    Evaluated e;
    e.value = coef * core;
    e.tail = std::abs(coef * p) * (j1.tail_bound * std::abs(j2.value * b.value) +
                                   std::abs(j1.value) * j2.tail_bound * std::abs(b.value) +
                                   std::abs(j1.value * j2.value) * b.tail_bound);
    return e;
  }

  AdditionSpec s_;
  QBase q_;
  double qv_;
  TruncationPolicy policy_;
  BesselMajorant maj_;
  std::map<long long, SeriesResult<double>> b_cache_;
  std::map<long long, double> b_major_;
  double lemma_constant_ = compute_lemma_constant();

  double compute_lemma_constant() const {
    auto lp = [&](double a) { return std::log(qpochhammer_infinite<double>(RParam(a), qv_).value); };
    return lp(-qv_) + lp(-q_.pow(s_.nu)) - lp(qv_) - 2 * lp(q_.pow(s_.nu));
  }
};

}  // namespace

IdentityReport check_addition_family(IdentityId id, Params& p, const TruncationPolicy& policy, double tol) {
  const QBase q = p.qbase();
  AdditionSpec spec;
  spec.id = id;
  spec.variant = static_cast<int>(p.integer_or("variant", 0));
  require(spec.variant == 0 || spec.variant == 1, "variant must be 0 or 1");
  spec.nu = p.real("nu");
  require(spec.nu > 0, "addition formula: need nu > 0");
  spec.x = p.real("x");
  spec.z = p.integer("z");
  require(spec.z >= 0, "addition formula: need z >= 0");
  spec.rows_max = p.integer_or("rows_max", 400);
  require(spec.rows_max >= 1, "rows_max must be positive");
  if (id == IdentityId::AdditionNInfinity) {
    spec.infinite_n = true;
    spec.mu = p.real("mu");
    require(spec.mu > -1, "addition_n_infinity: need mu > -1");
    spec.t = q.pow(spec.mu);
    spec.l = spec.variant == 0 ? 1 : 0;
  } else {
    spec.t = p.real("t");
    require(spec.t > 0 && spec.t * q.value() < 1, "addition formula: need 0 < t < 1/q");
    spec.big_n = p.integer("N");
    require(spec.big_n >= spec.z, "addition formula: need N >= z");
    if (id == IdentityId::Theorem41) {
      spec.l = p.integer("l");
    } else {
      // corollary43 is the derived general form at l = 1, the literal one at l = 0.
      spec.l = spec.variant == 0 ? 1 : 0;
    }
  }
  AdditionEngine engine(spec, q, policy);
  IdentityReport rep = engine.run(tol);
  return rep;
}

}  // namespace qbessel::detail
