#pragma once

// Little and big q-Bessel functions, little q-Jacobi and affine q-Krawtchouk
// polynomials, and the r-polynomials / c-coefficients of the little q-Jacobi
// addition formula.

#include <cmath>
#include <sstream>

#include "qbessel/hyperq.hpp"

namespace qbessel {

namespace detail {

template <class Real>
void require_order(Real alpha) {
  if (!(alpha > -1)) {
    std::ostringstream msg;
    msg << "order out of range: need alpha > -1, got " << alpha;
    throw DomainError(msg.str());
  }
}

template <class Real>
Real checked_sqrt(Real radicand, const char* what) {
  using std::sqrt;
  if (radicand < 0) {
    std::ostringstream msg;
    msg << what << ": negative radicand " << radicand;
    throw NegativeRadicand(msg.str());
  }
  return sqrt(radicand);
}

template <class To, class From>
To promote(const From& v) {
  if constexpr (is_complex_v<From>) {
    return To(typename To::value_type(v.real()), typename To::value_type(v.imag()));
  } else {
    return To(v);
  }
}

template <class To, class From>
To demote(const From& v) {
  if constexpr (is_complex_v<From>) {
    return To(static_cast<double>(v.real()), static_cast<double>(v.imag()));
  } else {
    return static_cast<To>(v);
  }
}

}  // namespace detail

/// Normalized little q-Bessel function j_α(z;q) = 1phi1(0; q^{α+1}; q, z).
template <class Scalar>
SeriesResult<Scalar> little_q_bessel_j(real_of_t<Scalar> alpha, const Scalar& z,
                                       const BasicQBase<real_of_t<Scalar>>& q, const TruncationPolicy& policy = {}) {
  detail::require_order(alpha);
  return phi11<Scalar>(QParam<Scalar>(Scalar(0)), QParam<Scalar>::power(alpha + 1, q.value()), q, z, policy);
}

/// Little q-Bessel function J_α(z;q) = z^α (q^{α+1};q)_∞/(q;q)_∞ j_α(z;q).
/// Non-integer orders are only defined for real z > 0.
template <class Scalar>
SeriesResult<Scalar> little_q_bessel_J(real_of_t<Scalar> alpha, const Scalar& z,
                                       const BasicQBase<real_of_t<Scalar>>& q, const TruncationPolicy& policy = {}) {
  using Real = real_of_t<Scalar>;
  using std::floor;
  using std::exp;
  using std::log;
  detail::require_order(alpha);
  const bool integer_order = floor(alpha) == alpha;
  Scalar zpow;
  if (integer_order) {
    zpow = Scalar(1);
    for (long long i = 0; i < static_cast<long long>(alpha); ++i) zpow *= z;
  } else {
    Real zr;
    bool positive_real;
    if constexpr (is_complex_v<Scalar>) {
      positive_real = z.imag() == 0 && z.real() > 0;
      zr = z.real();
    } else {
      positive_real = z > 0;
      zr = z;
    }
    if (!positive_real) {
      throw BranchError("little_q_bessel_J: non-integer order needs z real and positive");
    }
    zpow = Scalar(exp(alpha * log(zr)));
  }
  const Real ratio = qpoch_pow<Real>(alpha + 1, q.value(), kInfinity, policy) /
                     qpoch_pow<Real>(Real(1), q.value(), kInfinity, policy);
  auto j = little_q_bessel_j(alpha, z, q, policy);
  const Scalar pre = zpow * ratio;
  j.value *= pre;
  j.tail_bound *= magnitude(pre);
  return j;
}

/// Little q-Jacobi polynomial p_n(x; q^α, q^β; q)
///   = 2phi1(q^{-n}, q^{α+β+n+1}; q^{α+1}; q, qx),
/// orthogonal on the lattice {q^k : k >= 0}.
template <class Scalar>
Scalar little_q_jacobi(long long n, const Scalar& x, real_of_t<Scalar> alpha, real_of_t<Scalar> beta,
                       const BasicQBase<real_of_t<Scalar>>& q) {
  using Real = real_of_t<Scalar>;
  if (n < 0) throw DomainError("little_q_jacobi: degree must be non-negative");
  const Real qv = q.value();
  PhiSpec<Scalar> spec{{QParam<Scalar>::power(Real(-n), qv), QParam<Scalar>::power(alpha + beta + Real(n + 1), qv)},
                       {QParam<Scalar>::power(alpha + 1, qv)},
                       q,
                       Scalar(x * qv)};
  TruncationPolicy policy;
  policy.max_terms = static_cast<int>(n) + 8;
  return eval_phi(spec, policy).value;
}

/// Affine q-Krawtchouk polynomial K_z(x_arg; t, N; q)
///   = 3phi2(q^{-z}, x_arg, 0; tq, q^{-N}; q, q),
/// where x_arg stands for q^{-x}. Pass a lattice QParam to make the
/// (q^{-x};q)_k factors vanish exactly.
///
/// On the lattice the terms reach ~q^{-zx} times the value, so the double
/// instantiations sum in HighPrecision (about 25 spare digits at N = 8, q = 1/2).
template <class Scalar>
Scalar affine_q_krawtchouk(long long z, const QParam<Scalar>& x_arg, real_of_t<Scalar> t, long long big_n,
                           const BasicQBase<real_of_t<Scalar>>& q) {
  using Real = real_of_t<Scalar>;
  const Real qv = q.value();
  if constexpr (std::is_same_v<Real, double>) {
    using H = HighPrecision;
    using HS = std::conditional_t<std::is_same_v<Scalar, double>, H, std::complex<H>>;
    const H hq(qv);
    QParam<HS> hx = x_arg.exponent() && x_arg.base() == qv ? QParam<HS>::power(H(*x_arg.exponent()), hq)
                                                           : QParam<HS>(detail::promote<HS>(x_arg.value()));
    const HS v = affine_q_krawtchouk<HS>(z, hx, H(t), big_n, BasicQBase<H>(hq));
    return detail::demote<Scalar>(v);
  }
  if (z < 0 || z > big_n) {
    std::ostringstream msg;
    msg << "affine_q_krawtchouk: need 0 <= z <= N, got z = " << z << ", N = " << big_n;
    throw DomainError(msg.str());
  }
  if (!(t * qv > 0 && t * qv < 1)) throw DomainError("affine_q_krawtchouk: need 0 < tq < 1");
  PhiSpec<Scalar> spec{{QParam<Scalar>::power(Real(-z), qv), x_arg, QParam<Scalar>(Scalar(0))},
                       {QParam<Scalar>(Scalar(t * qv)), QParam<Scalar>::power(Real(-big_n), qv)},
                       q,
                       Scalar(qv)};
  TruncationPolicy policy;
  policy.max_terms = static_cast<int>(z) + 8;
  return eval_phi(spec, policy).value;
}

/// Hat-normalized affine q-Krawtchouk polynomial
///   (-1)^z (tq)^{-z/2} ((q^N;q^{-1})_z (tq;q)_z / (q;q)_z)^{1/2} K_z.
/// These are orthonormal for the weight (tq)^N (tq;q)_x (q;q)_N (tq)^{-x} / ((q;q)_x (q;q)_{N-x}).
template <class Scalar>
Scalar krawtchouk_hat(long long z, const QParam<Scalar>& x_arg, real_of_t<Scalar> t, long long big_n,
                      const BasicQBase<real_of_t<Scalar>>& q) {
  using Real = real_of_t<Scalar>;
  using std::pow;
  const Real qv = q.value();
  const Scalar k = affine_q_krawtchouk(z, x_arg, t, big_n, q);
  const Real radicand = qpoch_desc<Real>(Real(big_n), qv, PochIndex(z)) *
                        qpochhammer<Real>(QParam<Real>(t * qv), qv, PochIndex(z)) /
                        qpoch_pow<Real>(Real(1), qv, PochIndex(z));
  const Real norm = detail::checked_sqrt(radicand, "krawtchouk_hat") * pow(t * qv, -Real(z) / 2);
  return (z % 2 == 0 ? Scalar(norm) : Scalar(-norm)) * k;
}

/// Big q-Bessel function 𝒥_λ(x, a; q) = 1phi1(x^{-1}; a; q, -λ a x).
template <class Scalar>
SeriesResult<Scalar> big_q_bessel(const Scalar& lambda, const Scalar& x, const QParam<Scalar>& a,
                                  const BasicQBase<real_of_t<Scalar>>& q, const TruncationPolicy& policy = {}) {
  if (x == Scalar(0)) throw DomainError("big_q_bessel: x must be non-zero");
  return phi11<Scalar>(QParam<Scalar>(Scalar(1) / x), a, q, Scalar(-lambda * a.value() * x), policy);
}

/// Radicand and polynomial factor of r^{(ν)}_{l,m}(x;q); r = sqrt(radicand) * poly.
template <class Real>
struct RPolyParts {
  Real radicand{};
  Real poly{};
};

/// Pieces of
///   r_{l,m}^{(ν)}(x) = (xq;q)_{l-m}^{1/2} p_m(x; q^ν, q^{l-m})               l >= m
///                    = (x;q^{-1})_{m-l}^{1/2} p_l(x q^{l-m}; q^ν, q^{m-l})   l <= m
template <class Real>
RPolyParts<Real> r_poly_parts(long long l, long long m, Real nu, const QParam<Real>& x,
                              const BasicQBase<Real>& q) {
  if (l < 0 || m < 0) throw DomainError("r_poly: l and m must be non-negative");
  const Real qv = q.value();
  RPolyParts<Real> out;
  if (l >= m) {
    out.radicand = qpochhammer<Real>(x.scaled(Real(1), qv), qv, PochIndex(l - m));
    out.poly = little_q_jacobi<Real>(m, x.value(), nu, Real(l - m), q);
  } else {
    const QParam<Real> desc = x.exponent() ? QParam<Real>::power(-*x.exponent(), Real(1) / qv) : x;
    out.radicand = qpochhammer<Real>(desc, Real(1) / qv, PochIndex(m - l));
    out.poly = little_q_jacobi<Real>(l, x.scaled(Real(l - m), q.pow(Real(l - m))).value(), nu, Real(m - l), q);
  }
  return out;
}

template <class Real>
Real r_poly(long long l, long long m, Real nu, const QParam<Real>& x, const BasicQBase<Real>& q) {
  const auto parts = r_poly_parts(l, m, nu, x, q);
  return detail::checked_sqrt(parts.radicand, "r_poly") * parts.poly;
}

/// c^{(ν)}_{l,m}(q) = q^{m(ν+1)} (1 - q^{ν+1}) / (1 - q^{ν+l+m+1})
///                    · (q;q)_l (q;q)_m / ((q^{ν+1};q)_l (q^{ν+1};q)_m).
template <class Real>
Real c_norm(long long l, long long m, Real nu, const BasicQBase<Real>& q) {
  if (l < 0 || m < 0) throw DomainError("c_norm: l and m must be non-negative");
  detail::require_order(nu);
  const Real qv = q.value();
  using std::expm1;
  const Real lq = q.log_q();
  const Real num = -expm1((nu + 1) * lq) * qpoch_pow<Real>(Real(1), qv, PochIndex(l)) *
                   qpoch_pow<Real>(Real(1), qv, PochIndex(m));
  const Real den = -expm1((nu + Real(l + m + 1)) * lq) * qpoch_pow<Real>(nu + 1, qv, PochIndex(l)) *
                   qpoch_pow<Real>(nu + 1, qv, PochIndex(m));
  return q.pow(Real(m) * (nu + 1)) * num / den;
}

/// c^{(ν)}_{l,l,r,s}(q) = (1 - q^{ν+r+s+1})/(1 - q^{ν+1})
///                        · c^{(ν)}_{l,l} / (c^{(ν+r+s)}_{l-r,l-s} c^{(ν-1)}_{r,s}).
/// Needs ν > 0 so that c^{(ν-1)} is defined.
template <class Real>
Real c_addition(long long l, long long r, long long s, Real nu, const BasicQBase<Real>& q) {
  if (r < 0 || s < 0 || r > l || s > l) throw DomainError("c_addition: need 0 <= r, s <= l");
  if (!(nu > 0)) throw DomainError("c_addition: need nu > 0");
  using std::expm1;
  const Real lq = q.log_q();
  const Real ratio = expm1((nu + Real(r + s + 1)) * lq) / expm1((nu + 1) * lq);
  return ratio * c_norm(l, l, nu, q) / (c_norm(l - r, l - s, nu + Real(r + s), q) * c_norm(r, s, nu - 1, q));
}

}  // namespace qbessel
