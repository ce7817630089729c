#pragma once

// Identity certification harness. Every check evaluates both sides of one
// relation through separate code paths and reports the residual together
// with the truncation budget spent on infinite sums.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbessel/qspecial.hpp"

namespace qbessel {

using ParamMap = std::map<std::string, double>;

enum class IdentityId {
  Prop21,
  Transform27,
  JacobiOrth,
  KrawtchoukOrth,
  LimitJacobiBessel,
  LimitKrawtchoukBigBessel,
  FlorisKoelinkAddition,
  JacobiAddition,
  Theorem41,
  Corollary43,
  AdditionNInfinity,
  Prop51,
  ProductFormula52,
  KernelSymmetry,
  KernelPositivity,
  Bound24,
  Bound25,
  BoundLemma42,
  BoundProp32,
};

inline constexpr IdentityId kAllIdentities[] = {
    IdentityId::Prop21,           IdentityId::Transform27,
    IdentityId::JacobiOrth,       IdentityId::KrawtchoukOrth,
    IdentityId::LimitJacobiBessel, IdentityId::LimitKrawtchoukBigBessel,
    IdentityId::FlorisKoelinkAddition, IdentityId::JacobiAddition,
    IdentityId::Theorem41,        IdentityId::Corollary43,
    IdentityId::AdditionNInfinity, IdentityId::Prop51,
    IdentityId::ProductFormula52, IdentityId::KernelSymmetry,
    IdentityId::KernelPositivity, IdentityId::Bound24,
    IdentityId::Bound25,          IdentityId::BoundLemma42,
    IdentityId::BoundProp32,
};

/// Lower-case CLI name, e.g. "corollary43".
std::string_view identity_name(IdentityId id);
/// Case-insensitive lookup; std::nullopt for unknown names.
std::optional<IdentityId> parse_identity(std::string_view name);

struct IdentityReport {
  IdentityId id{};
  ParamMap params;
  Complex lhs{};
  Complex rhs{};
  double abs_residual = 0;
  double rel_residual = 0;
  double tail_budget = 0;
  bool pass = false;
};

/// Fills abs/rel residual and the pass flag from lhs, rhs and tail_budget.
void finalize_report(IdentityReport& report, double tol);

/// Bound checks report the violation max(0, lhs - rhs) instead of |lhs - rhs|.
void finalize_bound_report(IdentityReport& report, double tol);

/// Evaluate one identity instance. `params` must contain "q" and every free
/// variable of the identity (see README for the per-identity list). Throws
/// DomainError on missing or out-of-domain parameters; residual failure only
/// clears `pass`.
IdentityReport check_identity(IdentityId id, const ParamMap& params, const TruncationPolicy& policy, double tol);

struct LimitReport {
  IdentityId id{};
  ParamMap params;
  std::vector<long long> index_values;
  std::vector<double> residuals;
  Complex target{};
  bool monotone_tail = false;
};

/// Residuals of a limit transition at each index. LimitJacobiBessel needs
/// x, alpha, beta; LimitKrawtchoukBigBessel needs z, N, t, x (and optional
/// variant).
LimitReport run_limit_check(IdentityId id, const ParamMap& params, const std::vector<long long>& indices,
                            const TruncationPolicy& policy);

struct KernelValue {
  double value = 0;
  long long n_terms = 0;
  double tail_bound = 0;
};

/// Δ_ν(q^x, q^y, q^z; q), the product-formula kernel, summed over N >= max(x, z).
KernelValue kernel_delta(double nu, long long x, long long y, long long z, const QBase& q,
                         const TruncationPolicy& policy = {});

struct IntRange {
  long long lo = 0;
  long long hi = 0;
  long long size() const { return hi - lo + 1; }
  bool contains(long long v) const { return v >= lo && v <= hi; }
};

struct KernelEntry {
  long long x = 0;
  long long y = 0;
  long long z = 0;
  double delta = 0;
  double sym_residual = 0;
  double tail_bound = 0;
};

struct KernelTable {
  double nu = 0;
  double q = 0;
  IntRange x_range, y_range, z_range;
  std::vector<KernelEntry> grid;  ///< x-major, then y, then z
  double symmetry_residual_max = 0;
  double min_value = 0;
  long long n_sum_terms = 0;
};

/// Grid of kernel values filled in parallel; entries are ordered by (x, y, z)
/// regardless of scheduling.
KernelTable kernel_table(double nu, IntRange xr, IntRange yr, IntRange zr, const QBase& q,
                         const TruncationPolicy& policy = {});
/// Single-threaded fill, kept as the reference for the parallel version.
KernelTable kernel_table_serial(double nu, IntRange xr, IntRange yr, IntRange zr, const QBase& q,
                                const TruncationPolicy& policy = {});

/// |q^{(ν+1)e1} d1 - q^{(ν+1)e2} d2| / max of both magnitudes (0 if both vanish).
/// With e = x + y this compares the fully symmetric kernel q^{(ν+1)(x+y)} Δ.
double weighted_symmetry_residual(double nu, double q, long long e1, double d1, long long e2, double d2);

/// j_ν(q^x) j_ν(q^y) against Σ_{z=z_lo}^{z_hi} Δ_ν(x,y,z) j_ν(q^z).
IdentityReport product_expand(double nu, long long x, long long y, const QBase& q, long long z_lo, long long z_hi,
                              const TruncationPolicy& policy, double tol);

/// Random parameter sets for `id` drawn from its documented domain. The
/// sequence depends only on (id, n, seed, q).
std::vector<ParamMap> sweep_parameters(IdentityId id, int n, std::uint64_t seed, double q);

/// check_identity over every parameter set, evaluated concurrently; results
/// keep the input order.
std::vector<IdentityReport> run_sweep(IdentityId id, const std::vector<ParamMap>& params,
                                      const TruncationPolicy& policy, double tol);

}  // namespace qbessel
