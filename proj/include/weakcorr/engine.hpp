#pragma once

#include "weakcorr/model.hpp"

#include <sstream>
#include <utility>
#include <vector>

namespace weakcorr {

template <typename Real = double>
struct WeakValueResult {
  Complex<Real> value;       // imaginary part zero in real mode
  Real postselection_prob;   // Pr(b), in [0,1]
  Mode mode;
};

/// Joint quasi-probability table Pr(b, a), rows indexed by the b labels and
/// columns by the a labels (both descending). Entries are real in real mode;
/// negative or complex entries are expected, not errors.
template <typename Real = double>
struct QuasiProbTable {
  std::vector<Real> a_labels;
  std::vector<Real> b_labels;
  ComplexMatrix<Real> entries;  // b_labels.size() x a_labels.size()
  Mode mode = Mode::real;

  Complex<Real> total() const { return entries.sum(); }
  ComplexVector<Real> row_sums() const { return entries.rowwise().sum(); }
  ComplexVector<Real> col_sums() const { return entries.colwise().sum().transpose(); }

  Index b_index(Real b_label, double match_tol = Tolerances{}.label_match) const {
    return find_label(b_labels, b_label, match_tol);
  }
};

namespace detail {

/// Shared ratio for weak values of an arbitrary operator:
///   <psi| U1^dag U2^dag P_b U2 Op U1 |psi> / <psi| U1^dag U2^dag P_b U2 U1 |psi>.
/// The denominator is Pr(b); below the cutoff the ratio is undefined.
template <typename Real, typename Derived>
Complex<Real> weak_value_ratio(const Scenario<Real>& s,
                               const Eigen::MatrixBase<Derived>& op, Real b_label,
                               const Tolerances& tol) {
  const auto& proj = s.obs_b().projectors();
  const Index idx = proj.index_of(b_label, tol.label_match);
  const ComplexVector<Real> phi1 = s.evolution().u1() * s.psi().vector();
  const ComplexVector<Real> phi = s.evolution().u2() * phi1;
  const ComplexVector<Real> chi = s.evolution().u2() * (op.derived() * phi1);

  const Real denom = phi.dot(proj.projectors[idx] * phi).real();
  if (denom < tol.postselection_cutoff) {
    std::ostringstream os;
    os << "post-selection on b = " << b_label << " has probability " << denom
       << " below cutoff " << tol.postselection_cutoff << "; weak value undefined";
    throw Error(Errc::postselection_too_rare, os.str());
  }
  const Complex<Real> numer = phi.dot(proj.projectors[idx] * chi);
  return numer / denom;
}

template <typename Real>
Complex<Real> apply_mode(Complex<Real> z, Mode mode) {
  return mode == Mode::real ? Complex<Real>(z.real(), Real(0)) : z;
}

}  // namespace detail

/// Weak value of an arbitrary operator at t1 with post-selection on b.
template <typename Real, typename Derived>
Complex<Real> operator_weak_value(const Scenario<Real>& s,
                                  const Eigen::MatrixBase<Derived>& op, Real b_label,
                                  const Tolerances& tol = {}) {
  if (op.rows() != s.dim() || op.cols() != s.dim()) {
    throw Error(Errc::dimension_mismatch, "operator_weak_value: operator size mismatch");
  }
  return detail::apply_mode(detail::weak_value_ratio(s, op, b_label, tol), s.mode());
}

/// Weak value of A at t1 with post-selection on b:
///   Re <b| U2 A U1 |psi> / <b| U2 U1 |psi>   (full ratio in complex mode),
/// extended to degenerate b-groups through the group projector.
template <typename Real>
WeakValueResult<Real> weak_value(const Scenario<Real>& s, Real b_label,
                                 const Tolerances& tol = {}) {
  WeakValueResult<Real> out;
  out.value = operator_weak_value(s, s.obs_a().matrix(), b_label, tol);
  out.postselection_prob = postselection_probability(s, b_label, tol);
  out.mode = s.mode();
  return out;
}

/// Quasi-probability built on the two-time correlation function:
///   Pr(b, a) = Re <psi| P_b(t2) P_a(t1) |psi>,
/// with the real part kept full-complex in complex mode.
template <typename Real>
QuasiProbTable<Real> kd_quasiprobability(const Scenario<Real>& s) {
  const auto& proj_a = s.obs_a().projectors();
  const auto& proj_b = s.obs_b().projectors();
  const ComplexVector<Real>& psi = s.psi().vector();

  std::vector<ComplexMatrix<Real>> a_heis(proj_a.size());
  for (Index a = 0; a < proj_a.size(); ++a) {
    a_heis[a] = heisenberg_operator(proj_a.projectors[a], s.evolution(), Stage::t1);
  }

  QuasiProbTable<Real> table;
  table.a_labels = proj_a.labels;
  table.b_labels = proj_b.labels;
  table.mode = s.mode();
  table.entries.resize(proj_b.size(), proj_a.size());
  for (Index b = 0; b < proj_b.size(); ++b) {
    const ComplexMatrix<Real> b_heis =
        heisenberg_operator(proj_b.projectors[b], s.evolution(), Stage::t2);
    for (Index a = 0; a < proj_a.size(); ++a) {
      const Complex<Real> value = psi.dot(b_heis * (a_heis[a] * psi));
      table.entries(b, a) = detail::apply_mode(value, s.mode());
    }
  }
  return table;
}

/// Conditional quasi-probability Pr(a | b) = Pr(b, a) / Pr(b) for every a.
template <typename Real>
std::vector<std::pair<Real, Complex<Real>>> conditional_quasiprobability(
    const QuasiProbTable<Real>& table, Real b_label, const Tolerances& tol = {}) {
  const Index b = table.b_index(b_label, tol.label_match);
  // Pr(b) is real by construction; the row sum's imaginary part is rounding noise.
  const Real row_sum = table.entries.row(b).sum().real();
  if (row_sum < tol.postselection_cutoff) {
    std::ostringstream os;
    os << "conditional on b = " << b_label << " undefined: Pr(b) = " << row_sum
       << " below cutoff " << tol.postselection_cutoff;
    throw Error(Errc::postselection_too_rare, os.str());
  }
  std::vector<std::pair<Real, Complex<Real>>> out;
  out.reserve(table.a_labels.size());
  for (Index a = 0; a < static_cast<Index>(table.a_labels.size()); ++a) {
    out.emplace_back(table.a_labels[a], table.entries(b, a) / row_sum);
  }
  return out;
}

/// Average of the eigenvalue a over Pr(a | b), computed entirely through the
/// quasi-probability table. Shares no intermediates with weak_value beyond
/// the numeric kernel, so agreement between the two is a falsifiable check.
template <typename Real>
Complex<Real> conditional_average(const Scenario<Real>& s, Real b_label,
                                  const Tolerances& tol = {}) {
  const QuasiProbTable<Real> table = kd_quasiprobability(s);
  Complex<Real> sum(0, 0);
  for (const auto& [a_label, value] : conditional_quasiprobability(table, b_label, tol)) {
    sum += a_label * value;
  }
  return sum;
}

/// Two-time correlator Re <psi| B(t2) A(t1) |psi> (full value in complex mode).
template <typename Real>
Complex<Real> correlation_function(const Scenario<Real>& s) {
  const ComplexMatrix<Real> a_t1 =
      heisenberg_operator(s.obs_a().matrix(), s.evolution(), Stage::t1);
  const ComplexMatrix<Real> b_t2 =
      heisenberg_operator(s.obs_b().matrix(), s.evolution(), Stage::t2);
  const ComplexVector<Real>& psi = s.psi().vector();
  return detail::apply_mode(Complex<Real>(psi.dot(b_t2 * (a_t1 * psi))), s.mode());
}

/// True joint outcome distribution of measuring A at t1 then B at t2:
///   p(b, a) = ||P_b U2 P_a U1 psi||^2.
/// A genuine probability table; generally differs from kd_quasiprobability.
template <typename Real>
QuasiProbTable<Real> sequential_measurement_distribution(const Scenario<Real>& s) {
  const auto& proj_a = s.obs_a().projectors();
  const auto& proj_b = s.obs_b().projectors();
  const ComplexVector<Real> phi1 = s.evolution().u1() * s.psi().vector();

  QuasiProbTable<Real> table;
  table.a_labels = proj_a.labels;
  table.b_labels = proj_b.labels;
  table.mode = s.mode();
  table.entries.resize(proj_b.size(), proj_a.size());
  for (Index a = 0; a < proj_a.size(); ++a) {
    const ComplexVector<Real> collapsed = s.evolution().u2() * (proj_a.projectors[a] * phi1);
    for (Index b = 0; b < proj_b.size(); ++b) {
      const Real p = (proj_b.projectors[b] * collapsed).squaredNorm();
      table.entries(b, a) = Complex<Real>(p, Real(0));
    }
  }
  return table;
}

template <typename Real = double>
struct CommutingReduction {
  bool commuting = false;      // ||[A(t1), B(t2)]||_F within tolerance
  Real commutator_norm = 0;    // ||[A(t1), B(t2)]||_F
  Real max_deviation = 0;      // max |Pr(b,a) - p(b,a)| over the tables
  bool holds = false;          // commuting and the tables agree within tolerance
};

/// When A(t1) and B(t2) commute the quasi-probability reduces to the true
/// sequential-measurement distribution; this measures both facts.
template <typename Real>
CommutingReduction<Real> commuting_reduction_check(const Scenario<Real>& s,
                                                   const Tolerances& tol = {}) {
  const ComplexMatrix<Real> a_t1 =
      heisenberg_operator(s.obs_a().matrix(), s.evolution(), Stage::t1);
  const ComplexMatrix<Real> b_t2 =
      heisenberg_operator(s.obs_b().matrix(), s.evolution(), Stage::t2);

  CommutingReduction<Real> out;
  out.commutator_norm = (a_t1 * b_t2 - b_t2 * a_t1).norm();
  out.commuting = static_cast<double>(out.commutator_norm) <= tol.commuting;
  if (!out.commuting) {
    return out;
  }
  const QuasiProbTable<Real> quasi = kd_quasiprobability(s);
  const QuasiProbTable<Real> sequential = sequential_measurement_distribution(s);
  out.max_deviation = (quasi.entries - sequential.entries).cwiseAbs().maxCoeff();
  out.holds = static_cast<double>(out.max_deviation) <= tol.commuting;
  return out;
}

}  // namespace weakcorr
