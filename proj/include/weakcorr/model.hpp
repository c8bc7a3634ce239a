#pragma once

#include "weakcorr/kernel.hpp"
#include "weakcorr/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

namespace weakcorr {

/// Normalized pure state |psi>. Inputs within `ket_accept` of unit norm are
/// renormalized; anything further off is rejected.
template <typename Real = double>
class Ket {
 public:
  explicit Ket(ComplexVector<Real> v, const Tolerances& tol = {}) {
    if (v.size() < 1) {
      throw Error(Errc::validation_error, "Ket: state vector is empty");
    }
    if (!v.allFinite()) {
      throw Error(Errc::validation_error, "Ket: state vector has non-finite entries");
    }
    const Real norm = v.norm();
    if (std::abs(static_cast<double>(norm) - 1.0) > tol.ket_accept) {
      std::ostringstream os;
      os << "Ket: ||psi|| = " << norm << " is outside 1 +/- " << tol.ket_accept;
      throw Error(Errc::validation_error, os.str());
    }
    vector_ = std::move(v);
    vector_ /= norm;
  }

  const ComplexVector<Real>& vector() const { return vector_; }
  Index dim() const { return vector_.size(); }

 private:
  ComplexVector<Real> vector_;
};

/// Index of the outcome label nearest to `label` within `match_tol`.
template <typename Real>
Index find_label(const std::vector<Real>& labels, Real label,
                 double match_tol = Tolerances{}.label_match) {
  Index best = -1;
  double best_dist = match_tol;
  for (Index i = 0; i < static_cast<Index>(labels.size()); ++i) {
    const double dist = std::abs(static_cast<double>(labels[i] - label));
    if (dist <= best_dist) {
      best = i;
      best_dist = dist;
    }
  }
  if (best < 0) {
    std::ostringstream os;
    os << "no outcome label within " << match_tol << " of " << label << "; labels:";
    for (const Real l : labels) os << " " << l;
    throw Error(Errc::unknown_label, os.str());
  }
  return best;
}

/// Spectral projectors of an observable, one per degenerate eigenvalue group.
/// Labels are the group-mean eigenvalues, sorted descending.
template <typename Real = double>
struct ProjectorSet {
  std::vector<Real> labels;
  std::vector<ComplexMatrix<Real>> projectors;

  Index size() const { return static_cast<Index>(labels.size()); }

  Index index_of(Real label, double match_tol = Tolerances{}.label_match) const {
    return find_label(labels, label, match_tol);
  }
};

/// Groups eigenvalues that sit within group_tol * max(1, spread) of their
/// neighbor and sums the rank-1 projectors of each group.
template <typename Real>
ProjectorSet<Real> spectral_projectors(const EigenDecomposition<Real>& eig,
                                       double group_tol = Tolerances{}.group) {
  const Index d = eig.dim();
  const double spread =
      static_cast<double>(eig.eigenvalues[0] - eig.eigenvalues[d - 1]);
  const double threshold = group_tol * std::max(1.0, spread);

  ProjectorSet<Real> out;
  Index start = 0;
  while (start < d) {
    Index end = start + 1;
    while (end < d &&
           static_cast<double>(eig.eigenvalues[end - 1] - eig.eigenvalues[end]) <=
               threshold) {
      ++end;
    }
    const auto block = eig.eigenvectors.middleCols(start, end - start);
    out.labels.push_back(eig.eigenvalues.segment(start, end - start).mean());
    out.projectors.push_back(block * block.adjoint());
    start = end;
  }
  return out;
}

/// Hermitian observable with cached spectral data.
template <typename Real = double>
class Observable {
 public:
  explicit Observable(ComplexMatrix<Real> m, const Tolerances& tol = {})
      : matrix_(std::move(m)),
        decomposition_(hermitian_eig(matrix_, tol)),
        projectors_(spectral_projectors(decomposition_, tol.group)) {}

  const ComplexMatrix<Real>& matrix() const { return matrix_; }
  const EigenDecomposition<Real>& decomposition() const { return decomposition_; }
  const ProjectorSet<Real>& projectors() const { return projectors_; }
  Index dim() const { return matrix_.rows(); }

 private:
  ComplexMatrix<Real> matrix_;
  EigenDecomposition<Real> decomposition_;
  ProjectorSet<Real> projectors_;
};

template <typename Real>
ProjectorSet<Real> spectral_projectors(const Observable<Real>& obs,
                                       double group_tol = Tolerances{}.group) {
  return spectral_projectors(obs.decomposition(), group_tol);
}

/// Unitaries U1 (time 0 -> t1) and U2 (time t1 -> t2).
template <typename Real = double>
class TwoStageEvolution {
 public:
  TwoStageEvolution(ComplexMatrix<Real> u1, ComplexMatrix<Real> u2,
                    const Tolerances& tol = {})
      : u1_(std::move(u1)), u2_(std::move(u2)) {
    check(u1_, "u1", tol);
    check(u2_, "u2", tol);
    if (u1_.rows() != u2_.rows()) {
      throw Error(Errc::dimension_mismatch, "TwoStageEvolution: u1 and u2 differ in size");
    }
  }

  const ComplexMatrix<Real>& u1() const { return u1_; }
  const ComplexMatrix<Real>& u2() const { return u2_; }
  Index dim() const { return u1_.rows(); }

 private:
  static void check(const ComplexMatrix<Real>& u, const char* name,
                    const Tolerances& tol) {
    detail::require_square(u, "TwoStageEvolution");
    if (!u.allFinite()) {
      throw Error(Errc::validation_error,
                  std::string("TwoStageEvolution: ") + name + " has non-finite entries");
    }
    if (!is_unitary(u, tol.evolution_unitarity)) {
      std::ostringstream os;
      os << "TwoStageEvolution: " << name << " is not unitary, ||U^dag U - I||_F = "
         << (u.adjoint() * u - ComplexMatrix<Real>::Identity(u.rows(), u.cols())).norm();
      throw Error(Errc::validation_error, os.str());
    }
  }

  ComplexMatrix<Real> u1_;
  ComplexMatrix<Real> u2_;
};

enum class Stage { t1, t2 };

/// Heisenberg-picture operator for the two-stage evolution:
///   t1: U1^dag M U1            t2: U1^dag U2^dag M U2 U1
template <typename Derived, typename Real>
ComplexMatrix<Real> heisenberg_operator(const Eigen::MatrixBase<Derived>& op,
                                        const TwoStageEvolution<Real>& evo, Stage stage) {
  if (op.rows() != evo.dim() || op.cols() != evo.dim()) {
    std::ostringstream os;
    os << "heisenberg_operator: operator is " << op.rows() << "x" << op.cols()
       << " but the evolution acts on dimension " << evo.dim();
    throw Error(Errc::dimension_mismatch, os.str());
  }
  if (stage == Stage::t1) {
    return evo.u1().adjoint() * op.derived() * evo.u1();
  }
  const ComplexMatrix<Real> u21 = evo.u2() * evo.u1();
  return u21.adjoint() * op.derived() * u21;
}

/// Full pre/post-selection setup: |psi>, observables A and B, evolution, mode.
template <typename Real = double>
class Scenario {
 public:
  Scenario(Ket<Real> psi, Observable<Real> obs_a, Observable<Real> obs_b,
           TwoStageEvolution<Real> evolution, Mode mode)
      : psi_(std::move(psi)),
        obs_a_(std::move(obs_a)),
        obs_b_(std::move(obs_b)),
        evolution_(std::move(evolution)),
        mode_(mode) {
    const Index d = psi_.dim();
    if (obs_a_.dim() != d || obs_b_.dim() != d || evolution_.dim() != d) {
      std::ostringstream os;
      os << "Scenario: dimensions disagree (psi " << d << ", obs_a " << obs_a_.dim()
         << ", obs_b " << obs_b_.dim() << ", evolution " << evolution_.dim() << ")";
      throw Error(Errc::dimension_mismatch, os.str());
    }
  }

  const Ket<Real>& psi() const { return psi_; }
  const Observable<Real>& obs_a() const { return obs_a_; }
  const Observable<Real>& obs_b() const { return obs_b_; }
  const TwoStageEvolution<Real>& evolution() const { return evolution_; }
  Mode mode() const { return mode_; }
  Index dim() const { return psi_.dim(); }

  Scenario with_mode(Mode mode) const {
    Scenario copy = *this;
    copy.mode_ = mode;
    return copy;
  }

 private:
  Ket<Real> psi_;
  Observable<Real> obs_a_;
  Observable<Real> obs_b_;
  TwoStageEvolution<Real> evolution_;
  Mode mode_;
};

/// Pr(b) = <psi| P_b(t2) |psi> = ||P_b U2 U1 psi||^2, clamped to [0,1].
template <typename Real>
Real postselection_probability(const Scenario<Real>& s, Real b_label,
                               const Tolerances& tol = {}) {
  const auto& proj = s.obs_b().projectors();
  const Index idx = proj.index_of(b_label, tol.label_match);
  const ComplexVector<Real> phi = s.evolution().u2() * (s.evolution().u1() * s.psi().vector());
  const Real p = phi.dot(proj.projectors[idx] * phi).real();
  return std::clamp(p, Real(0), Real(1));
}

/// Pr(a) = <psi| P_a(t1) |psi>, the marginal of the intermediate observable.
template <typename Real>
Real intermediate_probability(const Scenario<Real>& s, Real a_label,
                              const Tolerances& tol = {}) {
  const auto& proj = s.obs_a().projectors();
  const Index idx = proj.index_of(a_label, tol.label_match);
  const ComplexVector<Real> phi1 = s.evolution().u1() * s.psi().vector();
  const Real p = phi1.dot(proj.projectors[idx] * phi1).real();
  return std::clamp(p, Real(0), Real(1));
}

}  // namespace weakcorr
