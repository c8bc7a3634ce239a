#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace weakcorr {

// Dense complex types, templated on the real scalar. Everything downstream
// works in natural units (hbar = 1), dimensionless entries.
template <typename Real = double>
using Complex = std::complex<Real>;

template <typename Real = double>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real = double>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real = double>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

/// Whether quantities keep their full complex value or take the real part
/// at the defining step (weak values, quasi-probability entries, correlators).
enum class Mode { real, complex };

inline const char* mode_name(Mode m) { return m == Mode::real ? "real" : "complex"; }

/// Single source of truth for every numeric tolerance in the library.
/// Frobenius norms throughout; "relative" means scaled by max(1, ||M||_F).
struct Tolerances {
  double hermiticity = 1e-10;           // relative ||M - M^dag||
  double eig_orthonormality = 1e-10;    // ||V^dag V - I||
  double eig_reconstruction = 1e-10;    // relative ||M - V Lambda V^dag||
  double unitarity = 1e-10;             // generated unitaries, ||U^dag U - I||
  double evolution_unitarity = 1e-9;    // accepted when building an evolution
  double projector = 1e-9;              // idempotence / completeness / orthogonality
  double ket_accept = 1e-6;             // normalize-on-construction window
  double group = 1e-9;                  // eigenvalue degeneracy grouping
  double label_match = 1e-9;            // outcome-label lookup
  double postselection_cutoff = 1e-12;  // below this Pr(b) the weak value is undefined
  double marginal = 1e-10;              // table marginal / normalization checks
  double eq3 = 1e-10;                   // conditional vs projector weak value
  double eq4 = 1e-9;                    // weak value vs conditional average
  double commuting = 1e-9;              // commutator norm / reduction deviation
  double real_part_consistency = 1e-12; // Re(complex-mode) vs real-mode
  double anomaly_margin = 1e-9;         // spectral-range excess that counts as anomalous
};

enum class Errc {
  not_hermitian,
  no_convergence,
  dimension_mismatch,
  unknown_label,
  postselection_too_rare,
  parse_error,
  validation_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::not_hermitian: return "NotHermitian";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::unknown_label: return "UnknownLabel";
    case Errc::postselection_too_rare: return "PostselectionTooRare";
    case Errc::parse_error: return "ParseError";
    case Errc::validation_error: return "ValidationError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace weakcorr
