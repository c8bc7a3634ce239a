#include "weakcorr/report.hpp"

#include "weakcorr/types.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace weakcorr {

namespace {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

ordered_json record_to_json(const CheckRecord& r) {
  ordered_json j;
  j["check_name"] = r.check_name;
  j["scenario_id"] = r.scenario_id;
  j["seed"] = r.seed;
  j["lhs"] = {r.lhs.real(), r.lhs.imag()};
  j["rhs"] = {r.rhs.real(), r.rhs.imag()};
  j["abs_error"] = r.abs_error;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  return j;
}

CheckRecord record_from_json(const json& j) {
  CheckRecord r;
  try {
    r.check_name = j.at("check_name").get<std::string>();
    r.scenario_id = j.at("scenario_id").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.lhs = {j.at("lhs").at(0).get<double>(), j.at("lhs").at(1).get<double>()};
    r.rhs = {j.at("rhs").at(0).get<double>(), j.at("rhs").at(1).get<double>()};
    r.abs_error = j.at("abs_error").get<double>();
    r.tolerance = j.at("tolerance").get<double>();
    r.pass = j.at("pass").get<bool>();
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("report record: ") + e.what());
  }
  return r;
}

}  // namespace

std::string format_digits17(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void finalize_summary(VerificationReport& report) {
  report.summary.total = report.records.size();
  report.summary.passed = 0;
  report.summary.failed = 0;
  report.summary.max_error = 0.0;
  for (const CheckRecord& r : report.records) {
    (r.pass ? report.summary.passed : report.summary.failed) += 1;
    report.summary.max_error = std::max(report.summary.max_error, r.abs_error);
  }
}

std::string emit_report(const VerificationReport& report, ReportFormat format) {
  if (format == ReportFormat::csv) {
    std::ostringstream os;
    os << "check_name,scenario_id,seed,lhs_re,lhs_im,rhs_re,rhs_im,abs_error,tolerance,pass\n";
    for (const CheckRecord& r : report.records) {
      os << r.check_name << ',' << r.scenario_id << ',' << r.seed << ','
         << format_digits17(r.lhs.real()) << ',' << format_digits17(r.lhs.imag()) << ','
         << format_digits17(r.rhs.real()) << ',' << format_digits17(r.rhs.imag()) << ','
         << format_digits17(r.abs_error) << ',' << format_digits17(r.tolerance) << ','
         << (r.pass ? "true" : "false") << '\n';
    }
    return os.str();
  }

  ordered_json root;
  root["schema"] = "weakcorr-report-v1";
  root["seed"] = report.seed;
  root["dims"] = report.dims;
  root["trials_per_dim"] = report.trials_per_dim;
  ordered_json records = ordered_json::array();
  for (const CheckRecord& r : report.records) records.push_back(record_to_json(r));
  root["records"] = std::move(records);
  root["summary"] = {{"total", report.summary.total},
                     {"passed", report.summary.passed},
                     {"failed", report.summary.failed},
                     {"skipped", report.summary.skipped},
                     {"max_error", report.summary.max_error}};
  return root.dump(2) + "\n";
}

VerificationReport parse_report_json(const std::string& text) {
  json root = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded() || !root.is_object()) {
    throw Error(Errc::parse_error, "report is not well-formed JSON");
  }
  if (root.value("schema", "") != "weakcorr-report-v1") {
    throw Error(Errc::parse_error, "report: unknown schema");
  }
  VerificationReport report;
  try {
    report.seed = root.at("seed").get<std::uint64_t>();
    report.dims = root.at("dims").get<std::vector<int>>();
    report.trials_per_dim = root.at("trials_per_dim").get<int>();
    for (const json& j : root.at("records")) {
      report.records.push_back(record_from_json(j));
    }
    const json& s = root.at("summary");
    report.summary.total = s.at("total").get<std::uint64_t>();
    report.summary.passed = s.at("passed").get<std::uint64_t>();
    report.summary.failed = s.at("failed").get<std::uint64_t>();
    report.summary.skipped = s.at("skipped").get<std::uint64_t>();
    report.summary.max_error = s.at("max_error").get<double>();
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("report: ") + e.what());
  }

  for (const CheckRecord& r : report.records) {
    if (r.pass != (r.abs_error <= r.tolerance)) {
      throw Error(Errc::validation_error,
                  "report record \"" + r.check_name + "\": pass flag contradicts abs_error");
    }
  }
  VerificationReport recount = report;
  finalize_summary(recount);
  if (recount.summary.total != report.summary.total ||
      recount.summary.passed != report.summary.passed ||
      recount.summary.failed != report.summary.failed) {
    throw Error(Errc::validation_error, "report summary counts disagree with records");
  }
  return report;
}

bool reports_equivalent(const VerificationReport& a, const VerificationReport& b) {
  return a.seed == b.seed && a.dims == b.dims && a.trials_per_dim == b.trials_per_dim &&
         a.records == b.records && a.summary.total == b.summary.total &&
         a.summary.passed == b.summary.passed && a.summary.failed == b.summary.failed &&
         a.summary.skipped == b.summary.skipped &&
         a.summary.max_error == b.summary.max_error;
}

}  // namespace weakcorr
