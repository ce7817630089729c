#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "qbessel/qspecial.hpp"

using namespace qbessel;
using oracle::H;

namespace {

const QBase q5(0.5);

H hq(double v) { return H(v); }

H oracle_jacobi(long long n, double x, double a, double b, double q) {
  using boost::multiprecision::pow;
  const H hqv = hq(q);
  return oracle::phi<H>({pow(hqv, H(-n)), pow(hqv, hq(a) + hq(b) + H(n + 1))}, {pow(hqv, hq(a) + 1)}, hqv,
                        hqv * hq(x), static_cast<int>(n) + 1);
}

H oracle_krawtchouk(long long z, double x, double t, long long big_n, double q) {
  using boost::multiprecision::pow;
  const H hqv = hq(q);
  return oracle::phi<H>({pow(hqv, H(-z)), pow(hqv, -hq(x)), H(0)}, {hq(t) * hqv, pow(hqv, H(-big_n))}, hqv, hqv,
                        static_cast<int>(z) + 1);
}

}  // namespace

TEST_CASE("little q-Bessel j: trivial values and domain") {
  CHECK(little_q_bessel_j<double>(1.5, 0.0, q5).value == 1.0);
  CHECK_THROWS_AS(little_q_bessel_j<double>(-1.0, 0.3, q5), DomainError);
  CHECK_THROWS_AS(little_q_bessel_j<double>(-2.5, 0.3, q5), DomainError);
}

TEST_CASE("little q-Bessel j against the oracle") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> alpha(-0.9, 4.0);
  std::uniform_real_distribution<double> zs(-10.0, 10.0);
  for (int i = 0; i < 40; ++i) {
    const double a = alpha(rng);
    const double z = zs(rng);
    const auto r = little_q_bessel_j<double>(a, z, q5);
    const double ref = static_cast<double>(oracle::little_j(hq(a), hq(z), hq(0.5)));
    CAPTURE(a);
    CAPTURE(z);
    CHECK(std::abs(r.value - ref) <= r.tail_bound + 1e-13 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("little q-Bessel J") {
  const double a = 1.5;
  const double z = 0.25;
  const double ratio = qpoch_pow(a + 1, 0.5, kInfinity) / qpoch_pow(1.0, 0.5, kInfinity);
  CHECK(little_q_bessel_J<double>(a, z, q5).value ==
        doctest::Approx(std::pow(z, a) * ratio * little_q_bessel_j<double>(a, z, q5).value).epsilon(1e-14));
  CHECK_THROWS_AS(little_q_bessel_J<double>(1.5, -0.25, q5), BranchError);
  CHECK_THROWS_AS(little_q_bessel_J<Complex>(1.5, Complex(0.3, 0.1), q5), BranchError);
  // integer order: defined for complex z
  const Complex zc(0.3, 0.4);
  const auto jc = little_q_bessel_J<Complex>(2.0, zc, q5);
  const double ratio2 = qpoch_pow(3.0, 0.5, kInfinity) / qpoch_pow(1.0, 0.5, kInfinity);
  const Complex expect = zc * zc * ratio2 * little_q_bessel_j<Complex>(2.0, zc, q5).value;
  CHECK(std::abs(jc.value - expect) < 1e-15);
  CHECK(jc.value.real() == doctest::Approx(0.30303301650190032176).epsilon(1e-13));
  CHECK(jc.value.imag() == doctest::Approx(0.26420756416548941141).epsilon(1e-13));
}

TEST_CASE("frozen little q-Bessel values") {
  CHECK(little_q_bessel_j<double>(1.5, 0.25, q5).value == doctest::Approx(0.49565429693419570526).epsilon(1e-14));
  CHECK(little_q_bessel_j<double>(0.3, 2.0, q5).value == doctest::Approx(0.12986821034730669745).epsilon(1e-13));
  CHECK(little_q_bessel_j<double>(1.5, -3.0, q5).value == doctest::Approx(45.746874913229350742).epsilon(1e-13));
  CHECK(little_q_bessel_J<double>(1.5, 0.25, q5).value == doctest::Approx(0.1471872967900012833).epsilon(1e-13));
}

TEST_CASE("little q-Jacobi polynomials") {
  CHECK(little_q_jacobi<double>(0, 0.7, 0.3, 0.7, q5) == 1.0);
  CHECK_THROWS_AS(little_q_jacobi<double>(-1, 0.7, 0.3, 0.7, q5), DomainError);
  // p_n(0) = 1 for every n
  for (int n = 0; n < 8; ++n) CHECK(little_q_jacobi<double>(n, 0.0, 0.3, 0.7, q5) == 1.0);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> xs(-2, 2);
  for (int n = 0; n <= 8; ++n) {
    for (int i = 0; i < 5; ++i) {
      const double x = xs(rng);
      const double ref = static_cast<double>(oracle_jacobi(n, x, 0.3, 0.7, 0.5));
      CHECK(little_q_jacobi<double>(n, x, 0.3, 0.7, q5) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
  CHECK(little_q_jacobi<double>(3, 0.4, 0.3, 0.7, q5) == doctest::Approx(-0.19332511108120727566).epsilon(1e-13));
}

TEST_CASE("affine q-Krawtchouk polynomials") {
  const auto x1 = QParam<double>::power(-1, 0.5);  // q^{-x} with x = 1
  CHECK(affine_q_krawtchouk<double>(0, x1, 0.5, 4, q5) == 1.0);
  CHECK(affine_q_krawtchouk<double>(2, x1, 0.5, 4, q5) == doctest::Approx(0.73333333333333333333).epsilon(1e-13));
  CHECK_THROWS_AS(affine_q_krawtchouk<double>(5, x1, 0.5, 4, q5), DomainError);
  CHECK_THROWS_AS(affine_q_krawtchouk<double>(-1, x1, 0.5, 4, q5), DomainError);
  CHECK_THROWS_AS(affine_q_krawtchouk<double>(1, x1, 2.5, 4, q5), DomainError);
  for (long long big_n = 0; big_n <= 6; ++big_n) {
    for (long long z = 0; z <= big_n; ++z) {
      for (long long x = 0; x <= big_n; ++x) {
        const double ref = static_cast<double>(oracle_krawtchouk(z, static_cast<double>(x), 0.3, big_n, 0.5));
        const double got = affine_q_krawtchouk<double>(z, QParam<double>::power(-x, 0.5), 0.3, big_n, q5);
        CHECK(got == doctest::Approx(ref).epsilon(1e-11));
      }
    }
  }
}

namespace {

// Σ_x w(x) K̂_m(x) K̂_n(x) - δ_{mn}
template <class Real>
Real krawtchouk_gram_defect(long long m, long long n, Real t, long long big_n, const BasicQBase<Real>& q) {
  using std::abs;
  using std::pow;
  const Real qv = q.value();
  const Real one(1);
  Real sum(0);
  for (long long x = 0; x <= big_n; ++x) {
    const Real w = pow(t * qv, Real(big_n - x)) * qpochhammer<Real>(QParam<Real>(t * qv), qv, PochIndex(x)) *
                   qpoch_pow<Real>(one, qv, PochIndex(big_n)) /
                   (qpoch_pow<Real>(one, qv, PochIndex(x)) * qpoch_pow<Real>(one, qv, PochIndex(big_n - x)));
    const auto xa = QParam<Real>::power(Real(-x), qv);
    sum += w * krawtchouk_hat<Real>(m, xa, t, big_n, q) * krawtchouk_hat<Real>(n, xa, t, big_n, q);
  }
  return abs(sum - (m == n ? one : Real(0)));
}

}  // namespace

TEST_CASE("hat-normalized Krawtchouk polynomials are orthonormal") {
  using H = HighPrecision;
  const BasicQBase<H> qh(H("0.5"));
  for (const char* t : {"0.3", "0.5", "1.5"}) {
    for (long long m = 0; m <= 5; ++m) {
      for (long long n = 0; n <= 5; ++n) {
        CAPTURE(t);
        CAPTURE(m);
        CAPTURE(n);
        CHECK(krawtchouk_gram_defect<H>(m, n, H(t), 5, qh) < H("1e-30"));
        // in double the terminating sums cancel down to ~q^{zx}, costing
        // up to ~7 digits near z = x = N
        CHECK(krawtchouk_gram_defect<double>(m, n, std::stod(t), 5, q5) < 1e-9);
      }
    }
  }
}

TEST_CASE("big q-Bessel function") {
  CHECK_THROWS_AS(big_q_bessel<double>(-0.25, 0.0, 0.4, q5), DomainError);
  const auto r = big_q_bessel<double>(-0.25, 0.5, 0.4, q5);
  CHECK(r.value == doctest::Approx(1.1666666666666666667).epsilon(1e-13));
  // λ = 0 collapses to 1
  CHECK(big_q_bessel<double>(0.0, 0.5, 0.4, q5).value == 1.0);
}

TEST_CASE("r-polynomials and c-coefficients") {
  const auto x = QParam<double>::power(2, 0.5);
  // l = m: radicand 1, polynomial p_l(x; q^ν, 1)
  const auto parts = r_poly_parts<double>(2, 2, 1.5, x, q5);
  CHECK(parts.radicand == 1.0);
  CHECK(parts.poly == doctest::Approx(little_q_jacobi<double>(2, 0.25, 1.5, 0.0, q5)));
  // l < m with x = q^z, z < m - l: radicand (q^z; q^{-1})_{m-l} vanishes
  CHECK(r_poly<double>(0, 3, 1.5, QParam<double>::power(1, 0.5), q5) == 0.0);
  CHECK_THROWS_AS(r_poly<double>(0, 2, 1.5, QParam<double>(0.7), q5), NegativeRadicand);
  CHECK_THROWS_AS(r_poly<double>(-1, 2, 1.5, x, q5), DomainError);
  for (int l = 0; l <= 4; ++l) CHECK(c_addition<double>(l, 0, 0, 1.5, q5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(c_addition<double>(2, 3, 0, 1.5, q5), DomainError);
  CHECK_THROWS_AS(c_addition<double>(2, 1, 1, 0.0, q5), DomainError);
  CHECK_THROWS_AS(c_norm<double>(1, 1, -1.5, q5), DomainError);
  CHECK(c_norm<double>(0, 0, 0.7, q5) == doctest::Approx(1.0));
}

TEST_CASE("templated kernels run at 50 digits") {
  using HP = HighPrecision;
  const BasicQBase<HP> q(HP("0.5"));
  TruncationPolicy tight;
  tight.eps_term = 1e-45;
  const auto r = little_q_bessel_j<HP>(HP("1.5"), HP("0.25"), q, tight);
  const H ref = oracle::little_j(H("1.5"), H("0.25"), H("0.5"));
  CHECK(boost::multiprecision::abs(r.value - ref) < HP("1e-40"));
}
