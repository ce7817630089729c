#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "qbessel/identities.hpp"

namespace qbessel::detail {

/// Typed access to a ParamMap. Every value read (including defaults) is
/// recorded so the report lists the full parameter set actually used.
class Params {
 public:
  explicit Params(const ParamMap& given) : given_(given), used_(given) {}

  double real(const std::string& key) {
    auto it = given_.find(key);
    if (it == given_.end()) throw DomainError("missing parameter '" + key + "'");
    if (!std::isfinite(it->second)) throw DomainError("parameter '" + key + "' must be finite");
    return it->second;
  }

  double real_or(const std::string& key, double fallback) {
    auto it = given_.find(key);
    if (it == given_.end()) {
      used_[key] = fallback;
      return fallback;
    }
    return real(key);
  }

  long long integer(const std::string& key) {
    const double v = real(key);
    return to_integer(key, v);
  }

  long long integer_or(const std::string& key, long long fallback) {
    const double v = real_or(key, static_cast<double>(fallback));
    return to_integer(key, v);
  }

  bool has(const std::string& key) const { return given_.count(key) != 0; }

  QBase qbase() { return QBase(real("q")); }

  const ParamMap& used() const { return used_; }

 private:
  static long long to_integer(const std::string& key, double v) {
    if (std::floor(v) != v || std::fabs(v) > 1e15) {
      std::ostringstream msg;
      msg << "parameter '" << key << "' must be an integer, got " << v;
      throw DomainError(msg.str());
    }
    return static_cast<long long>(v);
  }

  const ParamMap& given_;
  ParamMap used_;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

/// 1/(q^e; q^{-1})_n for any integer n. For n < 0 this is the finite product
/// (q^{e-n}; q^{-1})_{-n}, which may vanish.
inline double reciprocal_qpoch_desc(double e, double q, long long n) {
  if (n >= 0) {
    const double p = qpoch_desc(e, q, PochIndex(n));
    if (p == 0) throw ZeroDivisor("reciprocal of a vanishing descending q-shifted factorial");
    return 1.0 / p;
  }
  return qpoch_desc(e - static_cast<double>(n), q, PochIndex(-n));
}

/// Geometric tail estimate from the last two magnitudes of a decaying
/// sequence: 2 |a_k| ρ/(1-ρ) with ρ = max(a_k/a_{k-1}, rho_floor). Returns
/// infinity when the sequence is not decaying.
inline double geometric_tail(double last, double previous, double rho_floor = 0) {
  if (last == 0) return 0;
  if (previous == 0) return std::numeric_limits<double>::infinity();
  const double rho = std::max(last / previous, rho_floor);
  if (!(rho < 1)) return std::numeric_limits<double>::infinity();
  return 2 * last * rho / (1 - rho);
}

// Per-family checks, dispatched from check_identity.
IdentityReport check_finite_family(IdentityId id, Params& p, const TruncationPolicy& policy, double tol);
IdentityReport check_addition_family(IdentityId id, Params& p, const TruncationPolicy& policy, double tol);
IdentityReport check_product_family(IdentityId id, Params& p, const TruncationPolicy& policy, double tol);

}  // namespace qbessel::detail
