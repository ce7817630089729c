#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace qbessel {

using Complex = std::complex<double>;

/// 50-digit backend used to run the templated kernels as an oracle.
using HighPrecision = boost::multiprecision::cpp_bin_float_50;

template <class T>
struct real_of {
  using type = T;
};
template <class T>
struct real_of<std::complex<T>> {
  using type = T;
};
template <class T>
using real_of_t = typename real_of<T>::type;

template <class T>
inline constexpr bool is_complex_v = false;
template <class T>
inline constexpr bool is_complex_v<std::complex<T>> = true;

template <class Scalar>
real_of_t<Scalar> magnitude(const Scalar& v) {
  using std::abs;
  return abs(v);
}

template <class Scalar>
bool is_finite(const Scalar& v) {
  using std::isfinite;
  if constexpr (is_complex_v<Scalar>) {
    return isfinite(v.real()) && isfinite(v.imag());
  } else {
    return isfinite(v);
  }
}

/// Neumaier's variant of Kahan summation; complex values are compensated
/// component-wise.
template <class Scalar>
class CompensatedSum {
 public:
  void add(const Scalar& v) {
    if constexpr (is_complex_v<Scalar>) {
      re_.add(v.real());
      im_.add(v.imag());
    } else {
      using std::abs;
      const Scalar t = sum_ + v;
      if (abs(sum_) >= abs(v)) {
        comp_ += (sum_ - t) + v;
      } else {
        comp_ += (v - t) + sum_;
      }
      sum_ = t;
    }
  }

  CompensatedSum& operator+=(const Scalar& v) {
    add(v);
    return *this;
  }

  Scalar value() const {
    if constexpr (is_complex_v<Scalar>) {
      return Scalar(re_.value(), im_.value());
    } else {
      return sum_ + comp_;
    }
  }

 private:
  struct Empty {};
  using Part = std::conditional_t<is_complex_v<Scalar>, CompensatedSum<real_of_t<Scalar>>, Empty>;
  Scalar sum_{};
  Scalar comp_{};
  [[no_unique_address]] Part re_{};
  [[no_unique_address]] Part im_{};
};

}  // namespace qbessel
