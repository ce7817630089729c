#pragma once

// Basic hypergeometric series r-phi-s evaluated by term ratios, plus the
// 1phi1 relations used throughout the identity harness.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "qbessel/qcore.hpp"

namespace qbessel {

template <class Scalar>
struct PhiSpec {
  using Real = real_of_t<Scalar>;

  std::vector<QParam<Scalar>> numerator;
  std::vector<QParam<Scalar>> denominator;
  BasicQBase<Real> q;
  Scalar z{};
};

template <class Scalar>
struct SeriesResult {
  Scalar value{};
  long long terms_used = 0;
  real_of_t<Scalar> tail_bound{};
  bool terminated = false;  ///< a numerator q^{-n} cut the sum
};

namespace detail {

template <class Real>
bool is_nonpositive_integer(Real e) {
  using std::floor;
  return e <= 0 && floor(e) == e;
}

template <class Scalar>
bool can_terminate(const std::vector<QParam<Scalar>>& numerator) {
  for (const auto& a : numerator) {
    if (a.exponent() && is_nonpositive_integer(*a.exponent())) return true;
    if (!a.exponent() && a.value() == Scalar(1)) return true;
  }
  return false;
}

/// Stall bookkeeping shared by the series engines: a term counts as negligible
/// when it is below eps_term times the running max of |partial sum| (floored
/// at `floor`, 1 by default; pass 0 for a purely relative rule).
template <class Real>
class StallTracker {
 public:
  StallTracker(Real eps, int window, Real floor = Real(1)) : eps_(eps), window_(window), scale_(floor) {}

  void observe(Real term_abs, Real partial_abs) {
    scale_ = std::max(scale_, partial_abs);
    stall_ = term_abs <= eps_ * scale_ ? stall_ + 1 : 0;
  }
  void reset() { stall_ = 0; }
  bool stalled() const { return stall_ >= window_; }

 private:
  Real eps_;
  int window_;
  Real scale_;
  int stall_ = 0;
};

}  // namespace detail

/// r-phi-s by the multiplicative term ratio
///   t_{k+1}/t_k = Π(1 - a_i q^k) / (Π(1 - b_j q^k)(1 - q^{k+1})) · (-q^k)^{1+s-r} · z.
/// Stops exactly when a numerator factor vanishes, otherwise once stall_window
/// consecutive terms are negligible and the ratio majorant
///   R_k = Π(1 + |a_i| q^k) / (Π(1 - |b_j| q^k)(1 - q^{k+1})) · q^{k(1+s-r)} |z|
/// is below 1, which bounds the tail by |t_k| R_k / (1 - R_k).
template <class Scalar>
SeriesResult<Scalar> eval_phi(const PhiSpec<Scalar>& spec_in, const TruncationPolicy& policy = {}) {
  using Real = real_of_t<Scalar>;
  policy.validate();
  PhiSpec<Scalar> spec = spec_in;
  const Real q = spec.q.value();
  for (auto& a : spec.numerator) a = detail::on_base(a, q);
  for (auto& b : spec.denominator) b = detail::on_base(b, q);
  const int excess = 1 + static_cast<int>(spec.denominator.size()) - static_cast<int>(spec.numerator.size());
  const Real abs_z = magnitude(spec.z);

  SeriesResult<Scalar> out;
  if (spec.z == Scalar(0)) {
    out.value = Scalar(1);
    out.terms_used = 1;
    return out;
  }
  const bool terminating = detail::can_terminate(spec.numerator);
  const bool convergent = excess >= 1 || (excess == 0 && abs_z < 1);
  if (!convergent && !terminating) {
    std::ostringstream msg;
    msg << "series diverges: 1+s-r = " << excess << ", |z| = " << abs_z << " and no terminating numerator";
    throw DivergenceError(msg.str());
  }

  CompensatedSum<Scalar> sum;
  Scalar term(1);
  sum += term;
  detail::StallTracker<Real> stall(Real(policy.eps_term), policy.stall_window);
  Real qk(1);  // q^k
  for (long long k = 0;; ++k) {
    if (k + 1 >= policy.max_terms) {
      if (!convergent) throw DivergenceError("series diverges: max_terms reached without termination");
      throw BudgetExceeded("eval_phi: max_terms reached before the stopping rule applied");
    }
    Scalar num(1);
    for (const auto& a : spec.numerator) {
      const Scalar f = a.one_minus(Real(k), qk);
      if (f == Scalar(0)) {
        out.value = sum.value();
        out.terms_used = k + 1;
        out.terminated = true;
        return out;
      }
      num *= f;
    }
    Scalar den(Real(1) - qk * q);
    for (const auto& b : spec.denominator) {
      const Scalar f = b.one_minus(Real(k), qk);
      if (f == Scalar(0)) {
        std::ostringstream msg;
        msg << "denominator factor vanishes at k = " << k << " before the series terminates";
        throw PoleError(msg.str());
      }
      den *= f;
    }
    Scalar conv(1);
    if (excess != 0) {
      Real qpow(1);
      for (int i = 0; i < (excess > 0 ? excess : -excess); ++i) qpow *= qk;
      if (excess < 0) qpow = Real(1) / qpow;
      conv = Scalar((excess % 2 == 0) ? qpow : -qpow);
    }
    term = term * num / den * conv * spec.z;
    sum += term;
    if (!is_finite(term)) throw OverflowError("eval_phi: non-finite term");
    qk *= q;

    if (!convergent) continue;
    stall.observe(magnitude(term), magnitude(sum.value()));
    if (!stall.stalled()) continue;
    // Majorant of |t_{j+1}/t_j| for all j >= k+1.
    const long long j = k + 1;
    Real ratio(1);
    bool valid = true;
    for (const auto& a : spec.numerator) ratio *= Real(1) + magnitude(a.value()) * qk;
    for (const auto& b : spec.denominator) {
      const Real bq = magnitude(b.value()) * qk;
      if (bq >= 1) valid = false;
      ratio /= (Real(1) - bq);
    }
    ratio /= (Real(1) - qk * q);
    Real qpow(1);
    for (int i = 0; i < excess; ++i) qpow *= qk;
    ratio *= qpow * abs_z;
    if (valid && ratio < 1) {
      out.value = sum.value();
      out.terms_used = j + 1;
      out.tail_bound = magnitude(term) * ratio / (Real(1) - ratio);
      return out;
    }
  }
}

/// 1phi1(a; b; q, z). Entire in z.
template <class Scalar>
SeriesResult<Scalar> phi11(const QParam<Scalar>& a, const QParam<Scalar>& b, const BasicQBase<real_of_t<Scalar>>& q,
                           const Scalar& z, const TruncationPolicy& policy = {}) {
  return eval_phi(PhiSpec<Scalar>{{a}, {b}, q, z}, policy);
}

/// (b;q)_∞ · 1phi1(a; b; q, z), summed as Σ_k (a;q)_k (b q^k;q)_∞ / (q;q)_k
/// (-1)^k q^{k(k-1)/2} z^k. The product is entire in b, so b = q^{-m} is
/// allowed; the first m+1 terms then vanish.
template <class Scalar>
SeriesResult<Scalar> phi11_regularized(const QParam<Scalar>& a_in, const QParam<Scalar>& b_in,
                                       const BasicQBase<real_of_t<Scalar>>& q, const Scalar& z,
                                       const TruncationPolicy& policy = {}) {
  using Real = real_of_t<Scalar>;
  policy.validate();
  const Real qv = q.value();
  const QParam<Scalar> a = detail::on_base(a_in, qv);
  const QParam<Scalar> b = detail::on_base(b_in, qv);
  SeriesResult<Scalar> out;

  auto tail_product = [&](long long k, Real qk) {
    return qpochhammer_infinite(b.scaled(Real(k), qk), qv, policy).value;
  };

  Scalar pk = tail_product(0, Real(1));  // (b q^k; q)_∞
  if (z == Scalar(0)) {
    out.value = pk;
    out.terms_used = 1;
    return out;
  }
  CompensatedSum<Scalar> sum;
  Scalar u(1);  // (a;q)_k / (q;q)_k (-1)^k q^{k(k-1)/2} z^k
  sum += pk * u;
  detail::StallTracker<Real> stall(Real(policy.eps_term), policy.stall_window);
  const Real abs_a = magnitude(a.value());
  const Real abs_b = magnitude(b.value());
  const Real abs_z = magnitude(z);
  Real qk(1);
  for (long long k = 0;; ++k) {
    if (k + 1 >= policy.max_terms) {
      throw BudgetExceeded("phi11_regularized: max_terms reached before the stopping rule applied");
    }
    const Scalar fa = a.one_minus(Real(k), qk);
    if (fa == Scalar(0)) {
      out.value = sum.value();
      out.terms_used = k + 1;
      out.terminated = true;
      return out;
    }
    u = u * fa / (Real(1) - qk * qv) * (-qk) * z;
    const Scalar fb = b.one_minus(Real(k), qk);
    qk *= qv;
    if (fb == Scalar(0)) {
      pk = tail_product(k + 1, qk);
    } else {
      pk = pk / fb;
    }
    const Scalar term = pk * u;
    sum += term;
    if (!is_finite(term)) throw OverflowError("phi11_regularized: non-finite term");
    if (pk == Scalar(0)) {
      stall.reset();
      continue;
    }
    stall.observe(magnitude(term), magnitude(sum.value()));
    if (!stall.stalled()) continue;
    const Real bq = abs_b * qk;
    if (bq >= 1) continue;
    const Real ratio = (Real(1) + abs_a * qk) / ((Real(1) - qk * qv) * (Real(1) - bq)) * qk * abs_z;
    if (ratio < 1) {
      out.value = sum.value();
      out.terms_used = k + 2;
      out.tail_bound = magnitude(term) * ratio / (Real(1) - ratio);
      return out;
    }
  }
}

/// Right-hand side of the index-shift relation
///   (q^{1-n};q)_∞ 1phi1(a; q^{1-n}; q, z)
///     = (-z)^n q^{n(n-1)/2} (a;q)_n (q^{1+n};q)_∞ 1phi1(a q^n; q^{1+n}; q, q^n z),
/// with (a;q)_n taken from the negative-index rule when n < 0.
template <class Scalar>
SeriesResult<Scalar> phi11_shifted(long long n, const QParam<Scalar>& a, const Scalar& z,
                                   const BasicQBase<real_of_t<Scalar>>& q, const TruncationPolicy& policy = {}) {
  using Real = real_of_t<Scalar>;
  if (n < 0 && z == Scalar(0)) throw DomainError("phi11_shifted: z = 0 with n < 0");
  const Real qn = q.pow(Real(n));
  const Scalar an = qpochhammer(a, q.value(), PochIndex(n), policy);
  Scalar zpow(1);
  for (long long i = 0; i < (n >= 0 ? n : -n); ++i) zpow *= -z;
  if (n < 0) zpow = Scalar(1) / zpow;
  const Scalar pre = zpow * q.pow(Real(n) * Real(n - 1) / 2) * an;
  auto inner = phi11_regularized(a.scaled(Real(n), qn), QParam<Scalar>::power(Real(1 + n), q.value()), q,
                                 Scalar(z * qn), policy);
  inner.value *= pre;
  inner.tail_bound *= magnitude(pre);
  return inner;
}

}  // namespace qbessel
