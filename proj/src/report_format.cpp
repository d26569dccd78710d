#include "apcharge/report_format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "apcharge/error.hpp"

namespace apcharge {

ReportFormat parse_format(std::string_view name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "text") return ReportFormat::Text;
  throw Error(ErrorKind::UnknownFormat, "unknown output format '" + std::string(name) + "' (json, csv, text)");
}

nlohmann::json number_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::nan("");
    throw Error(ErrorKind::ParseError, "expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

nlohmann::json to_json(const TrialRecord& r) {
  nlohmann::json j = {{"seed", r.seed},       {"poly", r.poly},          {"lhs", number_json(r.lhs)},
                      {"rhs", number_json(r.rhs)}, {"ratio", number_json(r.ratio)}, {"residual", number_json(r.residual)},
                      {"skipped", r.skipped}, {"violation", r.violation}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

namespace {

TrialRecord record_from_json(const nlohmann::json& j) {
  TrialRecord r;
  r.seed = j.at("seed").get<std::uint64_t>();
  r.poly = j.value("poly", "");
  r.lhs = number_from_json(j.at("lhs"));
  r.rhs = number_from_json(j.at("rhs"));
  r.ratio = number_from_json(j.at("ratio"));
  r.residual = number_from_json(j.at("residual"));
  r.skipped = j.value("skipped", false);
  r.violation = j.value("violation", false);
  r.error = j.value("error", "");
  return r;
}

}  // namespace

nlohmann::json to_json(const InequalityReport& rep) {
  nlohmann::json params = {{"p", number_json(rep.p)}, {"q", number_json(rep.q)}};
  params["q_prime"] = rep.q_prime ? number_json(*rep.q_prime) : nlohmann::json(nullptr);
  nlohmann::json j = {{"name", rep.name},
                      {"params", params},
                      {"trials", rep.trials},
                      {"skipped", rep.skipped},
                      {"failures", rep.failures},
                      {"violations", rep.violations},
                      {"max_ratio", number_json(rep.max_ratio)},
                      {"mean_ratio", number_json(rep.mean_ratio)},
                      {"empirical_constant", number_json(rep.empirical_constant)},
                      {"last_quartile_max", number_json(rep.last_quartile_max)},
                      {"base_seed", rep.base_seed},
                      {"unit_constant", rep.unit_constant},
                      {"pass", rep.pass},
                      {"note", rep.note}};
  if (rep.spot) j["spot"] = to_json(*rep.spot);
  if (!rep.records.empty()) {
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& r : rep.records) recs.push_back(to_json(r));
    j["records"] = std::move(recs);
  }
  return j;
}

InequalityReport report_from_json(const nlohmann::json& j) {
  try {
    InequalityReport rep;
    rep.name = j.at("name").get<std::string>();
    const auto& params = j.at("params");
    rep.p = number_from_json(params.at("p"));
    rep.q = number_from_json(params.at("q"));
    if (!params.at("q_prime").is_null()) rep.q_prime = number_from_json(params.at("q_prime"));
    rep.trials = j.at("trials").get<std::size_t>();
    rep.skipped = j.at("skipped").get<std::size_t>();
    rep.failures = j.value("failures", std::size_t{0});
    rep.violations = j.at("violations").get<std::size_t>();
    rep.max_ratio = number_from_json(j.at("max_ratio"));
    rep.mean_ratio = number_from_json(j.at("mean_ratio"));
    rep.empirical_constant = number_from_json(j.at("empirical_constant"));
    rep.last_quartile_max = number_from_json(j.value("last_quartile_max", nlohmann::json(0.0)));
    rep.base_seed = j.at("base_seed").get<std::uint64_t>();
    rep.unit_constant = j.value("unit_constant", false);
    rep.pass = j.value("pass", false);
    rep.note = j.value("note", "");
    if (j.contains("spot")) rep.spot = record_from_json(j.at("spot"));
    if (j.contains("records")) {
      for (const auto& r : j.at("records")) rep.records.push_back(record_from_json(r));
    }
    return rep;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed report JSON: ") + e.what());
  }
}

std::string format_text_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

std::string shortest(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string text_report(const InequalityReport& rep) {
  std::ostringstream os;
  auto row = [&os](std::string_view key, const std::string& value) {
    os << key;
    for (std::size_t i = key.size(); i < 20; ++i) os << ' ';
    os << value << '\n';
  };
  row("inequality", rep.name);
  row("p", format_text_number(rep.p));
  row("q", format_text_number(rep.q));
  row("q_prime", rep.q_prime ? format_text_number(*rep.q_prime) : "-");
  row("trials", std::to_string(rep.trials));
  row("skipped", std::to_string(rep.skipped));
  row("failures", std::to_string(rep.failures));
  row("violations", rep.unit_constant ? std::to_string(rep.violations) : "n/a");
  row("max_ratio", format_text_number(rep.max_ratio));
  row("mean_ratio", format_text_number(rep.mean_ratio));
  row("empirical_constant", format_text_number(rep.empirical_constant));
  row("base_seed", std::to_string(rep.base_seed));
  if (rep.spot && rep.spot->error.empty()) {
    row("spot 2cos x lhs", format_text_number(rep.spot->lhs));
    row("spot 2cos x rhs", format_text_number(rep.spot->rhs));
    row("spot 2cos x ratio", format_text_number(rep.spot->ratio));
  }
  row("result", rep.pass ? "pass" : "FAIL");
  return os.str();
}

}  // namespace

std::string format_report(const InequalityReport& rep, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return to_json(rep).dump(2) + "\n";
    case ReportFormat::Csv: {
      std::string out = "seed,lhs,rhs,ratio,residual\n";
      for (const auto& r : rep.records) {
        out += std::to_string(r.seed) + ',' + shortest(r.lhs) + ',' + shortest(r.rhs) + ',' + shortest(r.ratio) + ',' +
               shortest(r.residual) + '\n';
      }
      return out;
    }
    case ReportFormat::Text: return text_report(rep);
  }
  throw Error(ErrorKind::UnknownFormat, "unknown output format");
}

std::string format_report(const InequalityReport& report, std::string_view format) {
  return format_report(report, parse_format(format));
}

}  // namespace apcharge
