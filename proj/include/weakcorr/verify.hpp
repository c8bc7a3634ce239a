#pragma once

#include "weakcorr/engine.hpp"
#include "weakcorr/report.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace weakcorr {

/// Random scenario: ket, two Hermitian observables, two Gram-Schmidt
/// unitaries, all drawn in that order from one xoshiro256++ stream keyed by
/// `scenario_seed`.
Scenario<double> random_scenario(std::uint64_t scenario_seed, int dim, Mode mode,
                                 const Tolerances& tol = {});

/// Random scenario engineered so that A(t1) and B(t2) commute: B is a
/// U2-conjugated function of A, B = U2 (V g(Lambda) V^dag) U2^dag with fresh
/// random spectrum values g.
Scenario<double> random_commuting_scenario(std::uint64_t scenario_seed, int dim, Mode mode,
                                           const Tolerances& tol = {});

/// Seeded randomized campaign over every engine invariant: the weak value /
/// conditional average identity, the conditional-vs-projector identity, the
/// table marginals and normalization, the correlator weighted sum, the
/// sequential distribution's positivity, and real-part consistency between
/// modes. Trials alternate real and complex mode. Labels whose post-selection
/// probability falls below the cutoff are counted as skipped. Deterministic
/// for fixed inputs; failures become report records, never exceptions.
VerificationReport run_verification_suite(std::uint64_t seed, const std::vector<int>& dims,
                                          int trials_per_dim, const Tolerances& tol = {});

/// A weak value that escaped the spectral range of A.
struct AnomalyRecord {
  std::string scenario_id;
  double b_label = 0.0;
  double weak_value = 0.0;
  double spectral_min = 0.0;
  double spectral_max = 0.0;
  double excess = 0.0;  // signed distance past the nearer spectral edge
};

/// Scans the given scenarios (evaluated in real mode) for anomalous weak
/// values; each hit is re-derived through the conditional-average path before
/// it is reported. Sorted by |excess| descending.
std::vector<AnomalyRecord> scan_scenarios(
    const std::vector<std::pair<std::string, Scenario<double>>>& scenarios,
    const Tolerances& tol = {});

/// Scans `trials` random scenarios of the given dimension.
std::vector<AnomalyRecord> scan_anomalous(std::uint64_t seed, int dim, int trials,
                                          const Tolerances& tol = {});

}  // namespace weakcorr
