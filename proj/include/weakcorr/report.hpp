#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace weakcorr {

/// One invariant evaluation. `pass` is defined as abs_error <= tolerance.
struct CheckRecord {
  std::string check_name;
  std::string scenario_id;
  std::uint64_t seed = 0;
  std::complex<double> lhs;
  std::complex<double> rhs;
  double abs_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  bool operator==(const CheckRecord&) const = default;
};

struct ReportSummary {
  std::uint64_t total = 0;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::uint64_t skipped = 0;  // post-selection labels below the probability cutoff
  double max_error = 0.0;
  double wall_time_seconds = 0.0;  // informational; never serialized
};

struct VerificationReport {
  std::uint64_t seed = 0;
  std::vector<int> dims;
  int trials_per_dim = 0;
  std::vector<CheckRecord> records;
  ReportSummary summary;
};

enum class ReportFormat { json, csv };

/// Recomputes summary counts and max_error from the records; `skipped` is
/// left as set by the producer.
void finalize_summary(VerificationReport& report);

/// Deterministic serialization. Wall time is excluded so identical inputs
/// emit byte-identical reports. CSV carries the records only, with columns
///   check_name, scenario_id, seed, lhs_re, lhs_im, rhs_re, rhs_im,
///   abs_error, tolerance, pass
/// and 17 significant digits per number.
std::string emit_report(const VerificationReport& report, ReportFormat format);

/// Inverse of the JSON emission; validates record/summary consistency.
VerificationReport parse_report_json(const std::string& text);

/// Field equality modulo wall time.
bool reports_equivalent(const VerificationReport& a, const VerificationReport& b);

/// Shortest text that round-trips a double: printf "%.17g".
std::string format_digits17(double value);

}  // namespace weakcorr
