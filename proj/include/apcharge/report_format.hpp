#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "apcharge/inequalities.hpp"

namespace apcharge {

enum class ReportFormat { Json, Csv, Text };

// "json", "csv" or "text"; UnknownFormat otherwise.
ReportFormat parse_format(std::string_view name);

// Infinite values become the string "inf" (JSON has no infinity).
nlohmann::json number_json(double x);
double number_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TrialRecord& r);
nlohmann::json to_json(const InequalityReport& report);
InequalityReport report_from_json(const nlohmann::json& j);

// 12 significant digits, as used by text output.
std::string format_text_number(double x);

// JSON: the report object. CSV: one row per trial record under the header
// seed,lhs,rhs,ratio,residual. Text: a summary table.
std::string format_report(const InequalityReport& report, ReportFormat format);
std::string format_report(const InequalityReport& report, std::string_view format);

}  // namespace apcharge
