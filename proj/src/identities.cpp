#include "qbessel/identities.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>
#include <utility>

#include "check_util.hpp"

namespace qbessel {

namespace {

constexpr std::array<std::pair<IdentityId, std::string_view>, 19> kNames{{
    {IdentityId::Prop21, "prop21"},
    {IdentityId::Transform27, "transform27"},
    {IdentityId::JacobiOrth, "jacobi_orth"},
    {IdentityId::KrawtchoukOrth, "krawtchouk_orth"},
    {IdentityId::LimitJacobiBessel, "limit_jacobi_bessel"},
    {IdentityId::LimitKrawtchoukBigBessel, "limit_krawtchouk_big_bessel"},
    {IdentityId::FlorisKoelinkAddition, "floris_koelink_addition"},
    {IdentityId::JacobiAddition, "jacobi_addition"},
    {IdentityId::Theorem41, "theorem41"},
    {IdentityId::Corollary43, "corollary43"},
    {IdentityId::AdditionNInfinity, "addition_n_infinity"},
    {IdentityId::Prop51, "prop51"},
    {IdentityId::ProductFormula52, "product_formula52"},
    {IdentityId::KernelSymmetry, "kernel_symmetry"},
    {IdentityId::KernelPositivity, "kernel_positivity"},
    {IdentityId::Bound24, "bound24"},
    {IdentityId::Bound25, "bound25"},
    {IdentityId::BoundLemma42, "bound_lemma42"},
    {IdentityId::BoundProp32, "bound_prop32"},
}};

std::string normalize(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == '-' || c == '_') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

bool residuals_monotone_tail(const std::vector<double>& r) {
  if (r.size() < 2) return true;
  const std::size_t start = r.size() / 2;
  for (std::size_t i = std::max<std::size_t>(start, 1); i < r.size(); ++i) {
    if (r[i] > r[i - 1]) return false;
  }
  return true;
}

}  // namespace

std::string_view identity_name(IdentityId id) {
  for (const auto& [key, name] : kNames) {
    if (key == id) return name;
  }
  return "unknown";
}

std::optional<IdentityId> parse_identity(std::string_view name) {
  const std::string wanted = normalize(name);
  for (const auto& [key, candidate] : kNames) {
    if (normalize(candidate) == wanted) return key;
  }
  // Short aliases used on the command line.
  if (wanted == "prop31") return IdentityId::LimitJacobiBessel;
  if (wanted == "prop32") return IdentityId::LimitKrawtchoukBigBessel;
  if (wanted == "floriskoelink") return IdentityId::FlorisKoelinkAddition;
  if (wanted == "thm41") return IdentityId::Theorem41;
  if (wanted == "cor43") return IdentityId::Corollary43;
  if (wanted == "ninfinity" || wanted == "additionninf") return IdentityId::AdditionNInfinity;
  if (wanted == "productformula" || wanted == "kernelproduct") return IdentityId::ProductFormula52;
  return std::nullopt;
}

void finalize_report(IdentityReport& report, double tol) {
  report.abs_residual = std::abs(report.lhs - report.rhs);
  const double scale = std::max({std::abs(report.lhs), std::abs(report.rhs), 1.0});
  report.rel_residual = report.abs_residual / scale;
  report.pass = report.rel_residual <= tol && report.tail_budget <= tol / 10;
}

void finalize_bound_report(IdentityReport& report, double tol) {
  report.abs_residual = std::max(0.0, report.lhs.real() - report.rhs.real());
  const double scale = std::max({std::abs(report.lhs), std::abs(report.rhs), 1.0});
  report.rel_residual = report.abs_residual / scale;
  report.pass = report.rel_residual <= tol && report.tail_budget <= tol / 10;
}

IdentityReport check_identity(IdentityId id, const ParamMap& params, const TruncationPolicy& policy, double tol) {
  policy.validate();
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  detail::Params p(params);
  IdentityReport report;
  switch (id) {
    case IdentityId::Prop21:
    case IdentityId::Transform27:
    case IdentityId::JacobiOrth:
    case IdentityId::KrawtchoukOrth:
    case IdentityId::LimitJacobiBessel:
    case IdentityId::LimitKrawtchoukBigBessel:
    case IdentityId::FlorisKoelinkAddition:
    case IdentityId::JacobiAddition:
    case IdentityId::Bound24:
    case IdentityId::Bound25:
    case IdentityId::BoundLemma42:
    case IdentityId::BoundProp32:
      report = detail::check_finite_family(id, p, policy, tol);
      break;
    case IdentityId::Theorem41:
    case IdentityId::Corollary43:
    case IdentityId::AdditionNInfinity:
      report = detail::check_addition_family(id, p, policy, tol);
      break;
    case IdentityId::Prop51:
    case IdentityId::ProductFormula52:
    case IdentityId::KernelSymmetry:
    case IdentityId::KernelPositivity:
      report = detail::check_product_family(id, p, policy, tol);
      break;
  }
  report.id = id;
  for (const auto& [k, v] : p.used()) report.params.try_emplace(k, v);
  return report;
}

LimitReport run_limit_check(IdentityId id, const ParamMap& params, const std::vector<long long>& indices,
                            const TruncationPolicy& policy) {
  if (id != IdentityId::LimitJacobiBessel && id != IdentityId::LimitKrawtchoukBigBessel) {
    throw DomainError("run_limit_check: identity is not a limit transition");
  }
  if (indices.empty()) throw DomainError("run_limit_check: no indices");
  for (std::size_t i = 1; i < indices.size(); ++i) {
    if (indices[i] <= indices[i - 1]) throw DomainError("run_limit_check: indices must be increasing");
  }
  LimitReport out;
  out.id = id;
  out.index_values = indices;
  const char* index_key = id == IdentityId::LimitJacobiBessel ? "n" : "m";
  for (long long idx : indices) {
    ParamMap point = params;
    point[index_key] = static_cast<double>(idx);
    // The residual is read off the report; tol only affects the pass flag.
    const IdentityReport r = check_identity(id, point, policy, 1.0);
    out.residuals.push_back(r.abs_residual);
    out.target = r.rhs;
    if (out.params.empty()) {
      out.params = r.params;
      out.params.erase(index_key);
    }
  }
  out.monotone_tail = residuals_monotone_tail(out.residuals);
  return out;
}

}  // namespace qbessel
