#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbessel/identities.hpp"

namespace qbessel {

/// Shortest decimal string that parses back to the same double. Non-finite
/// values print as "nan", "inf" or "-inf".
std::string format_double(double v);

/// JSON object {identity, params, lhs, rhs, abs_residual, rel_residual,
/// tail_budget, pass}. Non-finite numbers become null.
nlohmann::ordered_json report_to_json(const IdentityReport& r);
nlohmann::ordered_json limit_to_json(const LimitReport& r);
nlohmann::ordered_json kernel_to_json(const KernelTable& t);

/// A single report is written as an object, several as an array.
void write_reports_json(std::ostream& os, const std::vector<IdentityReport>& reports);
/// One row per report; params are packed as `key=value` pairs joined by ';'.
void write_reports_csv(std::ostream& os, const std::vector<IdentityReport>& reports);

void write_limit_json(std::ostream& os, const LimitReport& r);
void write_limit_csv(std::ostream& os, const LimitReport& r);

void write_kernel_json(std::ostream& os, const KernelTable& t);
/// Columns x,y,z,delta,sym_residual.
void write_kernel_csv(std::ostream& os, const KernelTable& t);

}  // namespace qbessel
