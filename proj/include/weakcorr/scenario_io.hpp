#pragma once

#include "weakcorr/model.hpp"

#include <filesystem>
#include <string>

namespace weakcorr {

// Scenario files are JSON with complex numbers as [re, im] pairs:
//
//   {
//     "dim": 2,
//     "mode": "real",                      // or "complex"
//     "psi": [[1,0],[0,0]],
//     "obs_a": [[[0,0],[1,0]],[[1,0],[0,0]]],
//     "obs_b": [[[1,0],[0,0]],[[0,0],[-1,0]]],
//     "evolution": {"u1": ..., "u2": ...}  // or {"h1", "t1_duration", "h2", "t2_duration"}
//   }
//
// Exactly one evolution form must be present; Hamiltonians are turned into
// unitaries as exp(-i H t). Malformed structure raises ParseError, physically
// invalid content raises ValidationError; both name the offending field.

Scenario<double> parse_scenario(const std::string& text, const Tolerances& tol = {});

Scenario<double> load_scenario(const std::filesystem::path& path,
                               const Tolerances& tol = {});

/// Canonical serialization; always writes the explicit-unitary evolution form.
std::string serialize_scenario(const Scenario<double>& scenario);

}  // namespace weakcorr
