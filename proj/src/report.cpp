#include "qbessel/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace qbessel {

namespace {

using Json = nlohmann::ordered_json;

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json complex_pair(Complex c) { return Json::array({number(c.real()), number(c.imag())}); }

Json params_json(const ParamMap& params) {
  Json out = Json::object();
  for (const auto& [k, v] : params) out[k] = number(v);
  return out;
}

std::string csv_params(const ParamMap& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ';';
    out += k + '=' + format_double(v);
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json report_to_json(const IdentityReport& r) {
  Json j;
  j["identity"] = std::string(identity_name(r.id));
  j["params"] = params_json(r.params);
  j["lhs"] = complex_pair(r.lhs);
  j["rhs"] = complex_pair(r.rhs);
  j["abs_residual"] = number(r.abs_residual);
  j["rel_residual"] = number(r.rel_residual);
  j["tail_budget"] = number(r.tail_budget);
  j["pass"] = r.pass;
  return j;
}

Json limit_to_json(const LimitReport& r) {
  Json j;
  j["identity"] = std::string(identity_name(r.id));
  j["params"] = params_json(r.params);
  j["indices"] = r.index_values;
  Json res = Json::array();
  for (double v : r.residuals) res.push_back(number(v));
  j["residuals"] = res;
  j["target"] = complex_pair(r.target);
  j["monotone_tail"] = r.monotone_tail;
  return j;
}

Json kernel_to_json(const KernelTable& t) {
  Json j;
  j["nu"] = t.nu;
  j["q"] = t.q;
  j["min_value"] = number(t.min_value);
  j["symmetry_residual_max"] = number(t.symmetry_residual_max);
  j["n_sum_terms"] = t.n_sum_terms;
  Json rows = Json::array();
  for (const auto& e : t.grid) {
    rows.push_back(Json{{"x", e.x}, {"y", e.y}, {"z", e.z}, {"delta", number(e.delta)},
                        {"sym_residual", number(e.sym_residual)}});
  }
  j["rows"] = rows;
  return j;
}

void write_reports_json(std::ostream& os, const std::vector<IdentityReport>& reports) {
  if (reports.size() == 1) {
    os << report_to_json(reports.front()).dump(2) << '\n';
    return;
  }
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  os << arr.dump(2) << '\n';
}

void write_reports_csv(std::ostream& os, const std::vector<IdentityReport>& reports) {
  os << "identity,params,lhs_re,lhs_im,rhs_re,rhs_im,abs_residual,rel_residual,tail_budget,pass\n";
  for (const auto& r : reports) {
    os << identity_name(r.id) << ',' << csv_params(r.params) << ',' << format_double(r.lhs.real()) << ','
       << format_double(r.lhs.imag()) << ',' << format_double(r.rhs.real()) << ',' << format_double(r.rhs.imag())
       << ',' << format_double(r.abs_residual) << ',' << format_double(r.rel_residual) << ','
       << format_double(r.tail_budget) << ',' << (r.pass ? "true" : "false") << '\n';
  }
}

void write_limit_json(std::ostream& os, const LimitReport& r) { os << limit_to_json(r).dump(2) << '\n'; }

void write_limit_csv(std::ostream& os, const LimitReport& r) {
  os << "index,residual\n";
  for (std::size_t i = 0; i < r.residuals.size(); ++i) {
    os << r.index_values[i] << ',' << format_double(r.residuals[i]) << '\n';
  }
}

void write_kernel_json(std::ostream& os, const KernelTable& t) { os << kernel_to_json(t).dump(2) << '\n'; }

void write_kernel_csv(std::ostream& os, const KernelTable& t) {
  os << "x,y,z,delta,sym_residual\n";
  for (const auto& e : t.grid) {
    os << e.x << ',' << e.y << ',' << e.z << ',' << format_double(e.delta) << ',' << format_double(e.sym_residual)
       << '\n';
  }
}

}  // namespace qbessel
