#include "weakcorr/model.hpp"

#include "weakcorr/fixtures.hpp"
#include "weakcorr/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace weakcorr;
using cx = std::complex<double>;

namespace {

Scenario<double> identity_evolution_scenario(ComplexVector<double> psi,
                                             ComplexMatrix<double> a,
                                             ComplexMatrix<double> b,
                                             Mode mode = Mode::real) {
  const Index d = psi.size();
  const ComplexMatrix<double> eye = ComplexMatrix<double>::Identity(d, d);
  return Scenario<double>(Ket<double>(std::move(psi)), Observable<double>(std::move(a)),
                          Observable<double>(std::move(b)),
                          TwoStageEvolution<double>(eye, eye), mode);
}

}  // namespace

TEST_CASE("spectral_projectors: sigma_z splits into coordinate projectors") {
  const auto proj = spectral_projectors(hermitian_eig(pauli_z()));
  REQUIRE(proj.size() == 2);
  CHECK(proj.labels[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(proj.labels[1] == doctest::Approx(-1.0).epsilon(1e-14));
  ComplexMatrix<double> p0 = ComplexMatrix<double>::Zero(2, 2);
  p0(0, 0) = 1.0;
  ComplexMatrix<double> p1 = ComplexMatrix<double>::Zero(2, 2);
  p1(1, 1) = 1.0;
  // Diagonal input must give coordinate projectors exactly, not approximately.
  CHECK((proj.projectors[0] - p0).norm() == 0.0);
  CHECK((proj.projectors[1] - p1).norm() == 0.0);
}

TEST_CASE("spectral_projectors: any diagonal matrix gives exact coordinate projectors") {
  ComplexMatrix<double> m = ComplexMatrix<double>::Zero(4, 4);
  m(0, 0) = 3.0;
  m(1, 1) = -1.0;
  m(2, 2) = 2.0;
  m(3, 3) = 0.5;
  const auto proj = spectral_projectors(hermitian_eig(m));
  REQUIRE(proj.size() == 4);
  for (Index i = 0; i < proj.size(); ++i) {
    for (Index r = 0; r < 4; ++r) {
      for (Index c = 0; c < 4; ++c) {
        const cx entry = proj.projectors[i](r, c);
        CHECK((entry == cx(0, 0) || entry == cx(1, 0)));
      }
    }
  }
}

TEST_CASE("spectral_projectors: full degeneracy collapses to one projector") {
  const ComplexMatrix<double> eye = ComplexMatrix<double>::Identity(3, 3);
  const auto proj = spectral_projectors(hermitian_eig(eye));
  REQUIRE(proj.size() == 1);
  CHECK(proj.labels[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((proj.projectors[0] - eye).norm() <= 1e-12);
}

TEST_CASE("spectral_projectors: constructed degenerate pair groups together") {
  // Spectrum {2, 2, -1} rotated by a random basis.
  const auto u = random_unitary(5, 3);
  RealVector<double> lambda(3);
  lambda << 2.0, 2.0, -1.0;
  const ComplexMatrix<double> m =
      u * lambda.cast<cx>().asDiagonal() * u.adjoint();
  const auto proj = spectral_projectors(hermitian_eig((m + m.adjoint()) / 2.0));
  REQUIRE(proj.size() == 2);
  CHECK(proj.labels[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(proj.labels[1] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(proj.projectors[0].trace().real() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("spectral_projectors: completeness, idempotence, orthogonality") {
  Xoshiro256PlusPlus gen(17);
  const auto m = random_hermitian(gen, 6);
  const auto proj = spectral_projectors(hermitian_eig(m));
  ComplexMatrix<double> sum = ComplexMatrix<double>::Zero(6, 6);
  for (Index i = 0; i < proj.size(); ++i) {
    const auto& p = proj.projectors[i];
    sum += p;
    CHECK((p * p - p).norm() <= 1e-9);
    CHECK((p - p.adjoint()).norm() <= 1e-9);
    for (Index j = 0; j < i; ++j) {
      CHECK((proj.projectors[i] * proj.projectors[j]).norm() <= 1e-9);
    }
  }
  CHECK((sum - ComplexMatrix<double>::Identity(6, 6)).norm() <= 1e-9);
}

TEST_CASE("projector label lookup") {
  const auto proj = spectral_projectors(hermitian_eig(pauli_z()));
  CHECK(proj.index_of(1.0) == 0);
  CHECK(proj.index_of(-1.0 + 5e-10) == 1);
  CHECK_THROWS_AS(proj.index_of(0.5), Error);
  try {
    proj.index_of(0.5);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unknown_label);
  }
}

TEST_CASE("heisenberg_operator: trivial evolution is the identity map") {
  const ComplexMatrix<double> eye = ComplexMatrix<double>::Identity(2, 2);
  const TwoStageEvolution<double> evo{eye, eye};
  CHECK((heisenberg_operator(pauli_z(), evo, Stage::t1) - pauli_z()).norm() <= 1e-15);
  CHECK((heisenberg_operator(pauli_z(), evo, Stage::t2) - pauli_z()).norm() <= 1e-15);
}

TEST_CASE("heisenberg_operator: sigma_x flips sigma_z at stage t2") {
  const ComplexMatrix<double> eye = ComplexMatrix<double>::Identity(2, 2);
  const TwoStageEvolution<double> evo{eye, pauli_x()};
  CHECK((heisenberg_operator(pauli_z(), evo, Stage::t2) + pauli_z()).norm() <= 1e-15);
  // Stage t1 only sees U1 = I.
  CHECK((heisenberg_operator(pauli_z(), evo, Stage::t1) - pauli_z()).norm() <= 1e-15);
}

TEST_CASE("heisenberg_operator: preserves spectrum, trace, and Hermiticity") {
  Xoshiro256PlusPlus gen(23);
  const auto m = random_hermitian(gen, 5);
  const TwoStageEvolution<double> evo{random_unitary(gen, 5), random_unitary(gen, 5)};
  const auto moved = heisenberg_operator(m, evo, Stage::t2);
  CHECK(std::abs(moved.trace() - m.trace()) <= 1e-9);
  CHECK(is_hermitian(moved));
  const auto before = hermitian_eig(m).eigenvalues;
  const auto after = hermitian_eig(moved).eigenvalues;
  CHECK((before - after).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("heisenberg_operator: dimension mismatch is rejected") {
  const ComplexMatrix<double> eye3 = ComplexMatrix<double>::Identity(3, 3);
  const TwoStageEvolution<double> evo{eye3, eye3};
  CHECK_THROWS_AS(heisenberg_operator(pauli_z(), evo, Stage::t1), Error);
}

TEST_CASE("postselection_probability: eigenstate and superposition") {
  ComplexVector<double> e0(2), plus(2);
  e0 << cx(1, 0), cx(0, 0);
  plus << cx(1 / std::sqrt(2.0), 0), cx(1 / std::sqrt(2.0), 0);

  const auto s0 = identity_evolution_scenario(e0, pauli_z(), pauli_z());
  CHECK(postselection_probability(s0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(postselection_probability(s0, -1.0) == doctest::Approx(0.0).epsilon(1e-14));

  const auto s1 = identity_evolution_scenario(plus, pauli_z(), pauli_z());
  CHECK(postselection_probability(s1, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("postselection_probability: sums to one over all labels") {
  Xoshiro256PlusPlus gen(29);
  for (int dim : {2, 4, 7}) {
    const Scenario<double> s{
        Ket<double>(random_ket(gen, dim)), Observable<double>(random_hermitian(gen, dim)),
        Observable<double>(random_hermitian(gen, dim)),
        TwoStageEvolution<double>(random_unitary(gen, dim), random_unitary(gen, dim)),
        Mode::real};
    double total = 0.0;
    for (const double b : s.obs_b().projectors().labels) {
      total += postselection_probability(s, b);
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("Ket: normalizes slightly-off input, rejects the rest") {
  ComplexVector<double> v(2);
  v << cx(1.0 + 5e-7, 0), cx(0, 0);
  const Ket<double> k(v);
  CHECK(std::abs(k.vector().norm() - 1.0) <= 1e-10);

  ComplexVector<double> bad(2);
  bad << cx(1.1, 0), cx(0, 0);
  CHECK_THROWS_AS((Ket<double>(bad)), Error);

  ComplexVector<double> nan_entry(2);
  nan_entry << cx(std::nan(""), 0), cx(0, 0);
  CHECK_THROWS_AS((Ket<double>(nan_entry)), Error);
}

TEST_CASE("Observable: rejects non-Hermitian matrices") {
  ComplexMatrix<double> m(2, 2);
  m << cx(0, 0), cx(1, 0), cx(2, 0), cx(0, 0);
  CHECK_THROWS_AS((Observable<double>(m)), Error);
}

TEST_CASE("TwoStageEvolution: rejects non-unitary matrices") {
  ComplexMatrix<double> m = ComplexMatrix<double>::Identity(2, 2) * cx(2.0, 0);
  const ComplexMatrix<double> eye = ComplexMatrix<double>::Identity(2, 2);
  CHECK_THROWS_AS((TwoStageEvolution<double>(m, eye)), Error);
}

TEST_CASE("Scenario: rejects dimension mismatch") {
  ComplexVector<double> e0(2);
  e0 << cx(1, 0), cx(0, 0);
  const ComplexMatrix<double> eye3 = ComplexMatrix<double>::Identity(3, 3);
  CHECK_THROWS_AS(Scenario<double>(Ket<double>(e0), Observable<double>(eye3),
                                   Observable<double>(eye3),
                                   TwoStageEvolution<double>(eye3, eye3), Mode::real),
                  Error);
}
