#pragma once

// q-shifted factorials (a;q)_n for non-negative, negative and infinite n.

#include <cmath>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <variant>

#include "qbessel/errors.hpp"
#include "qbessel/numeric.hpp"

namespace qbessel {

/// Deformation parameter 0 < q < 1. Every operation that builds an infinite
/// product or series takes one of these; q_max guards against bases so close
/// to 1 that truncation becomes impractical.
template <class Real>
class BasicQBase {
 public:
  static constexpr double kDefaultQMax = 0.99;

  explicit BasicQBase(Real q, Real q_max = Real(kDefaultQMax)) : q_(q), q_max_(q_max) {
    using std::isfinite;
    using std::log;
    if (!(q_max_ > 0 && q_max_ < 1)) {
      throw DomainError("q_max out of range: must lie in (0, 1)");
    }
    if (!(q_ > 0 && q_ < 1) || !isfinite(q_)) {
      std::ostringstream msg;
      msg << "q out of range: need 0 < q < 1, got " << q_;
      throw DomainError(msg.str());
    }
    if (q_ > q_max_) {
      std::ostringstream msg;
      msg << "q out of range: q = " << q_ << " exceeds q_max = " << q_max_;
      throw DomainError(msg.str());
    }
    log_q_ = log(q_);
  }

  Real value() const { return q_; }
  Real q_max() const { return q_max_; }
  Real log_q() const { return log_q_; }

  /// q^e with the principal real power.
  Real pow(Real e) const {
    using std::exp;
    return exp(e * log_q_);
  }

 private:
  Real q_;
  Real q_max_;
  Real log_q_{};
};

using QBase = BasicQBase<double>;

/// Stopping rules shared by every truncated product and series.
struct TruncationPolicy {
  double eps_term = 1e-17;  ///< terms (or |factor - 1|) below this are negligible
  double eps_tail = 1e-14;  ///< budget for outer-sum truncation in identity checks
  int max_terms = 10000;
  int stall_window = 3;  ///< consecutive negligible terms required to stop

  void validate() const {
    if (!(eps_term > 0) || !(eps_tail > 0) || max_terms < 1 || stall_window < 1) {
      throw DomainError("invalid truncation policy: need eps_term, eps_tail > 0, max_terms >= 1, stall_window >= 1");
    }
  }

  /// Same policy with eps_term divided by `factor` (used by refinement checks).
  TruncationPolicy tightened(double factor) const {
    TruncationPolicy p = *this;
    p.eps_term /= factor;
    p.eps_tail /= factor;
    return p;
  }
};

/// Subscript of a q-shifted factorial: a non-negative integer, a negative
/// integer, or infinity.
class PochIndex {
 public:
  struct NonNegative {
    long long n;
  };
  struct Negative {
    long long n;
  };
  struct Infinity {};

  PochIndex(long long n) {  // NOLINT(google-explicit-constructor)
    if (n >= 0) {
      tag_ = NonNegative{n};
    } else {
      tag_ = Negative{n};
    }
  }
  PochIndex(int n) : PochIndex(static_cast<long long>(n)) {}  // NOLINT(google-explicit-constructor)

  static PochIndex infinity() { return PochIndex(Infinity{}); }

  bool is_infinite() const { return std::holds_alternative<Infinity>(tag_); }
  bool is_negative() const { return std::holds_alternative<Negative>(tag_); }

  /// Signed finite value; only meaningful when !is_infinite().
  long long finite() const {
    if (auto* p = std::get_if<NonNegative>(&tag_)) return p->n;
    if (auto* p = std::get_if<Negative>(&tag_)) return p->n;
    throw DomainError("PochIndex::finite() called on infinity");
  }

  const std::variant<NonNegative, Negative, Infinity>& tag() const { return tag_; }

 private:
  explicit PochIndex(Infinity i) : tag_(i) {}
  std::variant<NonNegative, Negative, Infinity> tag_;
};

inline const PochIndex kInfinity = PochIndex::infinity();

/// A series or product parameter. Lattice values base^e carry their exponent
/// so that factors 1 - a·base^k vanish exactly when e + k = 0.
template <class Scalar>
class QParam {
 public:
  using Real = real_of_t<Scalar>;

  QParam() = default;
  QParam(Scalar v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  template <class T>
    requires(std::is_arithmetic_v<T> && !std::is_same_v<T, Scalar>)
  QParam(T v) : value_(Scalar(Real(v))) {}  // NOLINT(google-explicit-constructor)

  /// base^e.
  static QParam power(Real e, Real base) {
    using std::log;
    using std::exp;
    QParam p;
    p.exponent_ = e;
    p.base_ = base;
    p.log_base_ = log(base);
    p.value_ = Scalar(exp(e * p.log_base_));
    return p;
  }

  const Scalar& value() const { return value_; }
  const std::optional<Real>& exponent() const { return exponent_; }
  /// Base the exponent refers to (meaningless for plain values).
  Real base() const { return base_; }
  bool is_zero() const { return !exponent_ && value_ == Scalar(0); }

  /// a·base^k for the base the exponent refers to; a plain value is scaled by
  /// `base_pow_k`.
  QParam scaled(Real k, Real base_pow_k) const {
    if (exponent_) {
      QParam p = *this;
      using std::exp;
      p.exponent_ = *exponent_ + k;
      p.value_ = Scalar(exp(*p.exponent_ * log_base_));
      return p;
    }
    return QParam(value_ * base_pow_k);
  }

  /// 1 - a·base^k. `base_pow_k` must equal base^k; lattice parameters ignore
  /// it and use the exponent so the result is exactly 0 on the lattice.
  Scalar one_minus(Real k, Real base_pow_k) const {
    if (exponent_) {
      const Real e = *exponent_ + k;
      if (e == 0) return Scalar(0);
      using std::expm1;
      return Scalar(-expm1(e * log_base_));
    }
    return Scalar(1) - value_ * base_pow_k;
  }

 private:
  Scalar value_{};
  std::optional<Real> exponent_;
  Real base_{};
  Real log_base_{};
};

template <class Scalar>
struct InfiniteProduct {
  Scalar value{};
  long long factors = 0;
  real_of_t<Scalar> tail_bound{};  ///< bound on |true - value|
};

namespace detail {

template <class Real>
void require_unit_base(Real base) {
  if (!(base > 0 && base < 1)) {
    std::ostringstream msg;
    msg << "infinite q-shifted factorial needs 0 < base < 1, got " << base;
    throw DomainError(msg.str());
  }
}

template <class Scalar>
void require_finite(const Scalar& v, const char* what) {
  if (!is_finite(v)) {
    throw OverflowError(std::string(what) + ": non-finite intermediate");
  }
}

/// Lattice exponents only stay exact when the product runs over the base
/// they were built on; otherwise fall back to the plain value.
template <class Scalar>
QParam<Scalar> on_base(const QParam<Scalar>& a, real_of_t<Scalar> base) {
  if (a.exponent() && a.base() != base) return QParam<Scalar>(a.value());
  return a;
}

}  // namespace detail

/// (a;base)_∞ truncated once |a·base^k| < eps_term for stall_window
/// consecutive factors.
template <class Scalar>
InfiniteProduct<Scalar> qpochhammer_infinite(const QParam<Scalar>& a_in, real_of_t<Scalar> base,
                                             const TruncationPolicy& policy = {}) {
  using Real = real_of_t<Scalar>;
  using std::expm1;
  policy.validate();
  const QParam<Scalar> a = detail::on_base(a_in, base);
  detail::require_unit_base(base);
  InfiniteProduct<Scalar> out;
  if (a.is_zero()) {
    out.value = Scalar(1);
    return out;
  }
  const Real eps = Real(policy.eps_term);
  Scalar prod(1);
  Real bk(1);
  int stall = 0;
  long long k = 0;
  const Real abs_a = magnitude(a.value());
  for (;; ++k) {
    if (k >= policy.max_terms) {
      throw BudgetExceeded("infinite q-shifted factorial: max_terms reached before convergence");
    }
    const Scalar f = a.one_minus(Real(k), bk);
    if (f == Scalar(0)) {
      out.value = Scalar(0);
      out.factors = k + 1;
      return out;
    }
    prod *= f;
    const Real u = abs_a * bk;
    stall = (u < eps) ? stall + 1 : 0;
    bk *= base;
    if (stall >= policy.stall_window) break;
  }
  out.value = prod;
  out.factors = k + 1;
  // Σ_{j>=K} |a| base^j / (1 - |a| base^j) <= u_K / ((1 - base)(1 - u_K)).
  const Real uk = abs_a * bk;
  const Real s = uk / ((Real(1) - base) * (Real(1) - uk));
  out.tail_bound = magnitude(prod) * expm1(s);
  return out;
}

/// (a;base)_n. Finite n accepts any real base; n = ∞ needs 0 < base < 1.
template <class Scalar>
Scalar qpochhammer(const QParam<Scalar>& a_in, real_of_t<Scalar> base, const PochIndex& n,
                   const TruncationPolicy& policy = {}) {
  using Real = real_of_t<Scalar>;
  using std::abs;
  if (n.is_infinite()) return qpochhammer_infinite(a_in, base, policy).value;
  const QParam<Scalar> a = detail::on_base(a_in, base);
  const long long len = n.finite();
  if (len == 0 || a.is_zero()) return Scalar(1);
  if (base == 0) throw DomainError("q-shifted factorial with base 0");
  const long long count = len > 0 ? len : -len;
  if (abs(base) > 1 && count > policy.max_terms) {
    throw OverflowError("finite q-shifted factorial: |base| > 1 and n exceeds max_terms");
  }
  if (len > 0) {
    Scalar prod(1);
    Real bk(1);
    for (long long k = 0; k < len; ++k) {
      const Scalar f = a.one_minus(Real(k), bk);
      if (f == Scalar(0)) return Scalar(0);
      prod *= f;
      bk *= base;
    }
    detail::require_finite(prod, "q-shifted factorial");
    return prod;
  }
  // (a;b)_{-m} = 1 / (a b^{-m}; b)_m = 1 / Π_{j=1..m} (1 - a b^{-j}).
  Scalar prod(1);
  Real binv(1);
  for (long long j = 1; j <= count; ++j) {
    binv /= base;
    const Scalar f = a.one_minus(Real(-j), binv);
    if (f == Scalar(0)) {
      std::ostringstream msg;
      msg << "negative-index q-shifted factorial: factor (1 - a*base^" << -j << ") vanishes";
      throw ZeroDivisor(msg.str());
    }
    prod *= f;
  }
  detail::require_finite(prod, "q-shifted factorial");
  return Scalar(1) / prod;
}

/// (a_1,...,a_r;base)_n = Π_i (a_i;base)_n.
template <class Scalar>
Scalar qpochhammer_multi(std::span<const QParam<Scalar>> as, real_of_t<Scalar> base, const PochIndex& n,
                         const TruncationPolicy& policy = {}) {
  if (as.empty()) throw DomainError("qpochhammer_multi: empty parameter list");
  Scalar prod(1);
  for (const auto& a : as) prod *= qpochhammer(a, base, n, policy);
  return prod;
}

/// (base^e; base)_n for real exponents, exact zero on the lattice.
template <class Real>
Real qpoch_pow(Real e, Real base, const PochIndex& n, const TruncationPolicy& policy = {}) {
  return qpochhammer(QParam<Real>::power(e, base), base, n, policy);
}

/// (q^e; q^{-1})_n, the descending product Π_{k<n} (1 - q^{e-k}).
template <class Real>
Real qpoch_desc(Real e, Real q, const PochIndex& n, const TruncationPolicy& policy = {}) {
  const Real inv = Real(1) / q;
  return qpochhammer(QParam<Real>::power(-e, inv), inv, n, policy);
}

/// 1 / (q^e; q)_∞, taken as 0 when e is a non-positive integer (the reciprocal
/// is entire in q^e).
template <class Real>
Real reciprocal_qpoch_inf(Real e, Real q, const TruncationPolicy& policy = {}) {
  const Real p = qpoch_pow(e, q, kInfinity, policy);
  return p == Real(0) ? Real(0) : Real(1) / p;
}

}  // namespace qbessel
