#pragma once

#include "weakcorr/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace weakcorr {

/// Spectral decomposition of a Hermitian matrix. Column k of `eigenvectors`
/// pairs with `eigenvalues[k]`; eigenvalues are sorted descending.
template <typename Real = double>
struct EigenDecomposition {
  RealVector<Real> eigenvalues;
  ComplexMatrix<Real> eigenvectors;

  Index dim() const { return eigenvalues.size(); }

  /// ||M' - V Lambda V^dag||_F for the reconstructed matrix.
  ComplexMatrix<Real> reconstruct() const {
    return eigenvectors * eigenvalues.template cast<Complex<Real>>().asDiagonal() *
           eigenvectors.adjoint();
  }
};

namespace detail {

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    std::ostringstream os;
    os << who << ": expected a square matrix of dimension >= 1, got " << m.rows() << "x"
       << m.cols();
    throw Error(Errc::dimension_mismatch, os.str());
  }
}

}  // namespace detail

/// ||M - M^dag||_F <= tol * max(1, ||M||_F)
template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m,
                  double tol = Tolerances{}.hermiticity) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, static_cast<double>(m.norm()));
  return static_cast<double>((m - m.adjoint()).norm()) <= tol * scale;
}

/// ||U^dag U - I||_F <= tol
template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& m, double tol = Tolerances{}.unitarity) {
  if (m.rows() != m.cols()) return false;
  using Real = typename Derived::RealScalar;
  const ComplexMatrix<Real> gram = m.adjoint() * m;
  const ComplexMatrix<Real> eye = ComplexMatrix<Real>::Identity(m.rows(), m.cols());
  return static_cast<double>((gram - eye).norm()) <= tol;
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
///
/// The input is symmetrized as (M + M^dag)/2 before solving so the result is
/// exactly Hermitian-consistent; inputs outside the Hermiticity tolerance are
/// rejected instead. Deterministic for identical input.
template <typename Derived>
EigenDecomposition<typename Derived::RealScalar> hermitian_eig(
    const Eigen::MatrixBase<Derived>& m, const Tolerances& tol = {}) {
  using Real = typename Derived::RealScalar;
  static_assert(Eigen::NumTraits<typename Derived::Scalar>::IsComplex,
                "hermitian_eig expects a complex-valued matrix");
  detail::require_square(m, "hermitian_eig");
  if (!m.allFinite()) {
    throw Error(Errc::validation_error, "hermitian_eig: matrix has non-finite entries");
  }
  if (!is_hermitian(m, tol.hermiticity)) {
    std::ostringstream os;
    os << "hermitian_eig: ||M - M^dag||_F = " << (m - m.adjoint()).norm()
       << " exceeds tolerance " << tol.hermiticity << " * max(1, ||M||_F)";
    throw Error(Errc::not_hermitian, os.str());
  }

  const ComplexMatrix<Real> sym = (m.derived() + m.derived().adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::no_convergence,
                "hermitian_eig: eigensolver iteration budget exhausted");
  }

  // Eigen returns ascending order; flip to descending.
  EigenDecomposition<Real> out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

/// U = exp(-i H t) via the spectral decomposition of H (hbar = 1).
template <typename Derived>
ComplexMatrix<typename Derived::RealScalar> unitary_from_hamiltonian(
    const Eigen::MatrixBase<Derived>& h, typename Derived::RealScalar t,
    const Tolerances& tol = {}) {
  using Real = typename Derived::RealScalar;
  if (!std::isfinite(static_cast<double>(t))) {
    throw Error(Errc::validation_error, "unitary_from_hamiltonian: time is not finite");
  }
  const EigenDecomposition<Real> eig = hermitian_eig(h, tol);
  ComplexVector<Real> phases(eig.dim());
  for (Index k = 0; k < eig.dim(); ++k) {
    phases[k] = std::exp(Complex<Real>(Real(0), -eig.eigenvalues[k] * t));
  }
  return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

}  // namespace weakcorr
