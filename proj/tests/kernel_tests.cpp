#include "weakcorr/kernel.hpp"

#include "weakcorr/fixtures.hpp"
#include "weakcorr/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace weakcorr;
using cx = std::complex<double>;

namespace {

double orthonormality_residual(const ComplexMatrix<double>& v) {
  return (v.adjoint() * v - ComplexMatrix<double>::Identity(v.rows(), v.cols())).norm();
}

double reconstruction_residual(const ComplexMatrix<double>& m,
                               const EigenDecomposition<double>& eig) {
  return (m - eig.reconstruct()).norm() / std::max(1.0, m.norm());
}

}  // namespace

TEST_CASE("hermitian_eig: sigma_z is already diagonal") {
  const auto eig = hermitian_eig(pauli_z());
  CHECK(eig.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eig.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-14));
  // Column 0 must be e0 up to phase, column 1 must be e1 up to phase.
  CHECK(std::abs(eig.eigenvectors(0, 0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(eig.eigenvectors(1, 1)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(eig.eigenvectors(1, 0)) <= 1e-14);
  CHECK(std::abs(eig.eigenvectors(0, 1)) <= 1e-14);
}

TEST_CASE("hermitian_eig: sigma_x eigenvectors are (e0 +/- e1)/sqrt(2) up to phase") {
  const auto eig = hermitian_eig(pauli_x());
  CHECK(eig.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eig.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-14));
  ComplexVector<double> plus(2), minus(2);
  plus << cx(1, 0), cx(1, 0);
  minus << cx(1, 0), cx(-1, 0);
  plus /= std::sqrt(2.0);
  minus /= std::sqrt(2.0);
  CHECK(std::abs(plus.dot(eig.eigenvectors.col(0))) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(minus.dot(eig.eigenvectors.col(1))) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hermitian_eig: random matrices reconstruct and stay orthonormal") {
  for (std::uint64_t seed : {7ull, 8ull, 9ull}) {
    const auto m = random_hermitian(seed, 8);
    const auto eig = hermitian_eig(m);
    CHECK(reconstruction_residual(m, eig) <= 1e-10);
    CHECK(orthonormality_residual(eig.eigenvectors) <= 1e-10);
    for (Index k = 1; k < eig.dim(); ++k) {
      CHECK(eig.eigenvalues[k - 1] >= eig.eigenvalues[k]);
    }
  }
}

TEST_CASE("hermitian_eig: one-dimensional input") {
  ComplexMatrix<double> m(1, 1);
  m << cx(-2.5, 0);
  const auto eig = hermitian_eig(m);
  CHECK(eig.eigenvalues[0] == -2.5);
  CHECK(std::abs(eig.eigenvectors(0, 0)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("hermitian_eig: deterministic for identical input") {
  const auto m = random_hermitian(123, 6);
  const auto a = hermitian_eig(m);
  const auto b = hermitian_eig(m);
  CHECK((a.eigenvalues - b.eigenvalues).norm() == 0.0);
  CHECK((a.eigenvectors - b.eigenvectors).norm() == 0.0);
}

TEST_CASE("hermitian_eig: rejects non-Hermitian input") {
  ComplexMatrix<double> m(2, 2);
  m << cx(0, 0), cx(1, 0), cx(0, 0), cx(0, 0);
  CHECK_THROWS_AS(hermitian_eig(m), Error);
  try {
    hermitian_eig(m);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_hermitian);
  }
}

TEST_CASE("unitary_from_hamiltonian: zero Hamiltonian gives the identity") {
  const ComplexMatrix<double> h = ComplexMatrix<double>::Zero(3, 3);
  const auto u = unitary_from_hamiltonian(h, 2.7);
  CHECK((u - ComplexMatrix<double>::Identity(3, 3)).norm() <= 1e-14);
}

TEST_CASE("unitary_from_hamiltonian: sigma_z generates opposite phases") {
  const double theta = 0.7;
  const auto u = unitary_from_hamiltonian(pauli_z(), theta);
  CHECK(std::abs(u(0, 0) - std::exp(cx(0, -theta))) <= 1e-14);
  CHECK(std::abs(u(1, 1) - std::exp(cx(0, theta))) <= 1e-14);
  CHECK(std::abs(u(0, 1)) <= 1e-14);
  CHECK(std::abs(u(1, 0)) <= 1e-14);
}

TEST_CASE("unitary_from_hamiltonian: output is unitary") {
  const auto h = random_hermitian(5, 5);
  const auto u = unitary_from_hamiltonian(h, 1.3);
  CHECK(orthonormality_residual(u) <= 1e-12);
}

TEST_CASE("unitary_from_hamiltonian: propagates the Hermiticity check") {
  ComplexMatrix<double> m(2, 2);
  m << cx(0, 0), cx(1, 0), cx(0, 0), cx(0, 0);
  CHECK_THROWS_AS(unitary_from_hamiltonian(m, 1.0), Error);
  CHECK_THROWS_AS(unitary_from_hamiltonian(pauli_z(), std::nan("")), Error);
}

TEST_CASE("unitary_from_hamiltonian: group property U(s+t) = U(s) U(t)") {
  Xoshiro256PlusPlus gen(31);
  for (Index d = 2; d <= 8; ++d) {
    const auto h = random_hermitian(gen, d);
    const double s = 0.9, t = -1.7;
    const auto together = unitary_from_hamiltonian(h, s + t);
    const ComplexMatrix<double> separate =
        unitary_from_hamiltonian(h, s) * unitary_from_hamiltonian(h, t);
    CHECK((together - separate).norm() <= 1e-10);
  }
}

TEST_CASE("hermitian_eig: spectrum invariant under unitary conjugation") {
  Xoshiro256PlusPlus gen(77);
  for (Index d : {3, 6}) {
    const auto m = random_hermitian(gen, d);
    const auto u = random_unitary(gen, d);
    const auto plain = hermitian_eig(m);
    const auto conjugated = hermitian_eig((u.adjoint() * m * u).eval());
    CHECK((plain.eigenvalues - conjugated.eigenvalues).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("prng: matches the reference splitmix64 / xoshiro256++ streams") {
  SplitMix64 sm(1);
  CHECK(sm.next() == 0x910a2dec89025cc1ull);
  CHECK(sm.next() == 0xbeeb8da1658eec67ull);
  CHECK(sm.next() == 0xf893a2eefb32555eull);
  CHECK(sm.next() == 0x71c18690ee42c90bull);

  Xoshiro256PlusPlus gen(1);
  CHECK(gen.next() == 0xcfc5d07f6f03c29bull);
  CHECK(gen.next() == 0xbf424132963fe08dull);
  CHECK(gen.next() == 0x19a37d5757aaf520ull);
  CHECK(gen.next() == 0xbf08119f05cd56d6ull);

  Xoshiro256PlusPlus uniforms(42);
  CHECK(uniforms.uniform() == 0.8143051451229099);
  CHECK(uniforms.uniform() == 0.3188210400616611);

  Xoshiro256PlusPlus normals(42);
  const auto [z0, z1] = normal_pair(normals);
  CHECK(z0 == doctest::Approx(-0.7689930538210061).epsilon(1e-15));
  CHECK(z1 == doctest::Approx(1.6661184587142).epsilon(1e-15));
}

TEST_CASE("random instances: identical (seed, dim, kind) reproduce bit-identically") {
  CHECK((random_ket(42, 4) - random_ket(42, 4)).norm() == 0.0);
  CHECK((random_hermitian(42, 4) - random_hermitian(42, 4)).norm() == 0.0);
  CHECK((random_unitary(42, 4) - random_unitary(42, 4)).norm() == 0.0);
  CHECK((random_ket(42, 4) - random_ket(43, 4)).norm() > 0.0);
}

TEST_CASE("random instances: construction guarantees") {
  CHECK(std::abs(random_ket(42, 4).norm() - 1.0) <= 1e-12);
  const auto m = random_hermitian(11, 6);
  CHECK((m - m.adjoint()).norm() == 0.0);  // Hermitian by construction, exactly
  CHECK(orthonormality_residual(random_unitary(7, 6)) <= 1e-10);
  CHECK_THROWS_AS(random_ket(1, 0), Error);
}
