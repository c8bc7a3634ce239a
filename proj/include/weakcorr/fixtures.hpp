#pragma once

#include "weakcorr/engine.hpp"

#include <cmath>
#include <numbers>

namespace weakcorr {

template <typename Real = double>
ComplexMatrix<Real> pauli_x() {
  ComplexMatrix<Real> m(2, 2);
  m << Complex<Real>(0, 0), Complex<Real>(1, 0), Complex<Real>(1, 0), Complex<Real>(0, 0);
  return m;
}

template <typename Real = double>
ComplexMatrix<Real> pauli_y() {
  ComplexMatrix<Real> m(2, 2);
  m << Complex<Real>(0, 0), Complex<Real>(0, -1), Complex<Real>(0, 1), Complex<Real>(0, 0);
  return m;
}

template <typename Real = double>
ComplexMatrix<Real> pauli_z() {
  ComplexMatrix<Real> m(2, 2);
  m << Complex<Real>(1, 0), Complex<Real>(0, 0), Complex<Real>(0, 0), Complex<Real>(-1, 0);
  return m;
}

namespace detail {

template <typename Real>
Scenario<Real> qubit_scenario(Real theta, const ComplexMatrix<Real>& a,
                              const ComplexMatrix<Real>& b, Mode mode) {
  ComplexVector<Real> psi(2);
  psi << Complex<Real>(std::cos(theta), 0), Complex<Real>(std::sin(theta), 0);
  const ComplexMatrix<Real> eye = ComplexMatrix<Real>::Identity(2, 2);
  return Scenario<Real>(Ket<Real>(psi), Observable<Real>(a), Observable<Real>(b),
                        TwoStageEvolution<Real>(eye, eye), mode);
}

}  // namespace detail

/// |psi> = cos(pi/16)|0> + sin(pi/16)|1>, A = sigma_x, B = sigma_z, trivial
/// evolution. Post-selecting on b = -1 gives the weak value cot(pi/16),
/// far outside the sigma_x spectrum {+1, -1}.
template <typename Real = double>
Scenario<Real> anomalous_weak_value_fixture(Mode mode = Mode::real) {
  return detail::qubit_scenario(Real(std::numbers::pi / 16), pauli_x<Real>(),
                                pauli_z<Real>(), mode);
}

/// |psi> = cos(3 pi/8)|0> + sin(3 pi/8)|1>, A = sigma_x, B = sigma_z. The
/// quasi-probability entry at (b = +1, a = -1) is negative, -(sqrt(2)-1)/4.
template <typename Real = double>
Scenario<Real> kd_negativity_fixture(Mode mode = Mode::real) {
  return detail::qubit_scenario(Real(3 * std::numbers::pi / 8), pauli_x<Real>(),
                                pauli_z<Real>(), mode);
}

/// |psi> = |0>, A = sigma_x, B = sigma_z. The sequential-measurement table is
/// uniform 1/4 while the quasi-probability concentrates on the b = +1 row;
/// the two distributions answer different questions.
template <typename Real = double>
Scenario<Real> measurement_contrast_fixture(Mode mode = Mode::real) {
  return detail::qubit_scenario(Real(0), pauli_x<Real>(), pauli_z<Real>(), mode);
}

}  // namespace weakcorr
