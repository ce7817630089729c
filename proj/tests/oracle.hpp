#pragma once

// Brute-force 50-digit reference implementations. These deliberately avoid the
// library: plain loops, fixed generous term counts, no lattice bookkeeping.

#include <complex>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using H = boost::multiprecision::cpp_bin_float_50;
using HC = std::complex<H>;

inline H hp(double v) { return H(v); }

/// (a;q)_n for integer n, including the negative-index inverse.
template <class T>
T poch(const T& a, const H& q, long long n) {
  T p(1);
  if (n >= 0) {
    H qk(1);
    for (long long k = 0; k < n; ++k, qk *= q) p *= T(1) - a * qk;
    return p;
  }
  const long long m = -n;
  H qk = boost::multiprecision::pow(q, H(n));
  for (long long k = 0; k < m; ++k, qk *= q) p *= T(1) - a * qk;
  return T(1) / p;
}

template <class T>
T poch_inf(const T& a, const H& q, int terms = 400) {
  T p(1);
  H qk(1);
  for (int k = 0; k < terms; ++k, qk *= q) p *= T(1) - a * qk;
  return p;
}

/// r phi s with the (-1)^n q^{n(n-1)/2} factor raised to 1 + s - r.
template <class T>
T phi(const std::vector<T>& num, const std::vector<T>& den, const H& q, const T& z, int terms = 400) {
  const int excess = 1 + static_cast<int>(den.size()) - static_cast<int>(num.size());
  T sum(0);
  T term(1);
  H qn(1);
  for (int n = 0; n < terms; ++n) {
    sum += term;
    T ratio = z / (T(1) - T(q * qn));
    for (const auto& a : num) ratio *= T(1) - a * qn;
    for (const auto& b : den) ratio /= T(1) - b * qn;
    for (int e = 0; e < excess; ++e) ratio *= T(-qn);
    term *= ratio;
    qn *= q;
    if (term == T(0)) break;
  }
  return sum;
}

template <class T>
T phi11(const T& a, const T& b, const H& q, const T& z) {
  return phi<T>({a}, {b}, q, z);
}

/// (b;q)_∞ 1phi1(a; b; q, z), summed as Σ (a)_n (b q^n)_∞ / (q)_n (-1)^n q^{n(n-1)/2} z^n.
template <class T>
T phi11_regularized(const T& a, const T& b, const H& q, const T& z, int terms = 200) {
  T sum(0);
  H qn(1);
  T zn(1);
  for (int n = 0; n < terms; ++n) {
    const H sign = (n % 2 == 0) ? H(1) : H(-1);
    const H tri = boost::multiprecision::pow(q, H(n) * H(n - 1) / 2);
    sum += poch<T>(a, q, n) * poch_inf<T>(b * qn, q) / poch<H>(H(q), q, n) * T(sign * tri) * zn;
    qn *= q;
    zn *= z;
  }
  return sum;
}

inline H little_j(const H& alpha, const H& z, const H& q) {
  return phi11<H>(H(0), boost::multiprecision::pow(q, alpha + 1), q, z);
}

}  // namespace oracle
