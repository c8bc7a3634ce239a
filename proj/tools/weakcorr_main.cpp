#include "weakcorr/engine.hpp"
#include "weakcorr/fixtures.hpp"
#include "weakcorr/report.hpp"
#include "weakcorr/scenario_io.hpp"
#include "weakcorr/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace weakcorr;

constexpr int kExitAllPassed = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::string fmt(double x) { return format_digits17(x); }

std::string fmt(std::complex<double> z, Mode mode) {
  if (mode == Mode::real) return fmt(z.real());
  return fmt(z.real()) + (z.imag() < 0 ? " - " : " + ") + fmt(std::abs(z.imag())) + "i";
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw Error(Errc::validation_error, "cannot open output file: " + out_path);
  }
  out << text;
}

void print_table(const QuasiProbTable<double>& table, Mode mode) {
  std::cout << "a labels:";
  for (const double a : table.a_labels) std::cout << " " << fmt(a);
  std::cout << "\nb labels:";
  for (const double b : table.b_labels) std::cout << " " << fmt(b);
  std::cout << "\n";
  for (Index b = 0; b < table.entries.rows(); ++b) {
    std::cout << "b=" << fmt(table.b_labels[static_cast<std::size_t>(b)]) << ":";
    for (Index a = 0; a < table.entries.cols(); ++a) {
      std::cout << "  " << fmt(table.entries(b, a), mode);
    }
    std::cout << "\n";
  }
}

int cmd_verify(std::uint64_t seed, const std::vector<int>& dims, int trials,
               const std::string& format, const std::string& out_path) {
  const VerificationReport report = run_verification_suite(seed, dims, trials);
  write_output(emit_report(report, format == "csv" ? ReportFormat::csv : ReportFormat::json),
               out_path);
  std::cerr << "checks: " << report.summary.total << ", passed: " << report.summary.passed
            << ", failed: " << report.summary.failed
            << ", skipped labels: " << report.summary.skipped
            << ", max error: " << fmt(report.summary.max_error) << ", wall time: "
            << report.summary.wall_time_seconds << " s\n";
  return report.summary.failed == 0 ? kExitAllPassed : kExitCheckFailed;
}

int cmd_weakvalue(const std::string& path, double b_label) {
  const Scenario<double> s = load_scenario(path);
  const WeakValueResult<double> wv = weak_value(s, b_label);
  std::cout << "mode: " << mode_name(wv.mode) << "\n"
            << "post-selection label: " << fmt(b_label) << "\n"
            << "post-selection probability: " << fmt(wv.postselection_prob) << "\n"
            << "weak value: " << fmt(wv.value, wv.mode) << "\n";
  return kExitAllPassed;
}

int cmd_quasiprob(const std::string& path) {
  const Scenario<double> s = load_scenario(path);
  const QuasiProbTable<double> table = kd_quasiprobability(s);
  std::cout << "quasi-probability Pr(b, a), mode " << mode_name(table.mode) << "\n";
  print_table(table, table.mode);
  std::cout << "total: " << fmt(table.total(), table.mode) << "\n";
  return kExitAllPassed;
}

int cmd_scan(std::uint64_t seed, int dim, int trials) {
  const std::vector<AnomalyRecord> hits = scan_anomalous(seed, dim, trials);
  std::cout << "anomalous weak values: " << hits.size() << " of " << trials
            << " trials (dim " << dim << ", seed " << seed << ")\n";
  for (const AnomalyRecord& hit : hits) {
    std::cout << hit.scenario_id << "  b=" << fmt(hit.b_label)
              << "  weak value=" << fmt(hit.weak_value) << "  spectrum=["
              << fmt(hit.spectral_min) << ", " << fmt(hit.spectral_max)
              << "]  excess=" << fmt(hit.excess) << "\n";
  }
  return kExitAllPassed;
}

int demo_identity_lines(const Scenario<double>& s, const char* title) {
  int failures = 0;
  std::cout << title << "\n";
  for (const double b_label : s.obs_b().projectors().labels) {
    if (postselection_probability(s, b_label) <= Tolerances{}.postselection_cutoff) {
      std::cout << "  b=" << fmt(b_label) << ": post-selection probability below cutoff\n";
      continue;
    }
    const WeakValueResult<double> wv = weak_value(s, b_label);
    const std::complex<double> avg = conditional_average(s, b_label);
    const double err = std::abs(wv.value - avg);
    const bool ok = err <= Tolerances{}.eq4;
    failures += ok ? 0 : 1;
    std::cout << "  b=" << fmt(b_label) << ": weak value " << fmt(wv.value, s.mode())
              << "  conditional average " << fmt(avg, s.mode()) << "  |difference| "
              << fmt(err) << (ok ? "" : "  MISMATCH") << "\n";
  }
  return failures;
}

int cmd_demo() {
  int failures = 0;

  const Scenario<double> anomalous = anomalous_weak_value_fixture();
  failures += demo_identity_lines(
      anomalous, "anomalous qubit: |psi> = cos(pi/16)|0> + sin(pi/16)|1>, A = sigma_x, B = sigma_z");
  std::cout << "  (post-selecting b=-1 puts the weak value at cot(pi/16), outside the "
               "spectrum [-1, 1])\n\n";

  const Scenario<double> negativity = kd_negativity_fixture();
  failures += demo_identity_lines(
      negativity, "negative quasi-probability: |psi> = cos(3pi/8)|0> + sin(3pi/8)|1>, "
                  "A = sigma_x, B = sigma_z");
  print_table(kd_quasiprobability(negativity), negativity.mode());
  std::cout << "\n";

  const Scenario<double> contrast = measurement_contrast_fixture();
  failures += demo_identity_lines(contrast, "contrast: |psi> = |0>, A = sigma_x, B = sigma_z");
  std::cout << "quasi-probability table:\n";
  print_table(kd_quasiprobability(contrast), contrast.mode());
  std::cout << "sequential measurement table (a genuine probability distribution):\n";
  print_table(sequential_measurement_distribution(contrast), contrast.mode());

  return failures == 0 ? kExitAllPassed : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weak values, two-time correlation functions, and the quasi-probability "
               "distribution that connects them"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::vector<int> dims = {2, 3, 4};
  int trials = 25;
  std::string format = "json";
  std::string out_path;
  std::string scenario_path;
  double post_select = 0.0;
  int dim = 2;

  CLI::App* verify = app.add_subcommand("verify", "run the randomized identity campaign");
  verify->add_option("--seed", seed, "campaign seed")->capture_default_str();
  verify->add_option("--dims", dims, "Hilbert space dimensions (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  verify->add_option("--trials", trials, "trials per dimension")->capture_default_str();
  verify->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  verify->add_option("--out", out_path, "write the report to this file instead of stdout");

  CLI::App* weakvalue = app.add_subcommand("weakvalue", "weak value from a scenario file");
  weakvalue->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  weakvalue->add_option("--post-select", post_select, "post-selection label of B")->required();

  CLI::App* quasiprob = app.add_subcommand("quasiprob", "quasi-probability table from a scenario file");
  quasiprob->add_option("--scenario", scenario_path, "scenario JSON file")->required();

  CLI::App* scan = app.add_subcommand("scan", "hunt for weak values outside the spectrum of A");
  scan->add_option("--seed", seed, "scan seed")->capture_default_str();
  scan->add_option("--dim", dim, "Hilbert space dimension")->capture_default_str();
  scan->add_option("--trials", trials, "number of random scenarios")->capture_default_str();

  CLI::App* demo = app.add_subcommand("demo", "hand-computed qubit fixtures, both sides of the identity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(seed, dims, trials, format, out_path);
    if (weakvalue->parsed()) return cmd_weakvalue(scenario_path, post_select);
    if (quasiprob->parsed()) return cmd_quasiprob(scenario_path);
    if (scan->parsed()) return cmd_scan(seed, dim, trials);
    if (demo->parsed()) return cmd_demo();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
