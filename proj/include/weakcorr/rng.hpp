#pragma once

#include "weakcorr/types.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace weakcorr {

// Deterministic random instance generation.
//
// The generator is xoshiro256++ (Blackman & Vigna), seeded by taking four
// consecutive outputs of splitmix64 applied to the 64-bit seed. Streams are
// therefore reproducible from the seed alone, in any implementation of the
// same two published algorithms. Derived quantities consume the stream in a
// fixed order:
//
//   uniform double in [0,1):  (next() >> 11) * 2^-53
//   normal pair (Box-Muller): u1, u2 uniform;  r = sqrt(-2 ln(1 - u1)),
//                             z0 = r cos(2 pi u2), z1 = r sin(2 pi u2)
//   complex normal:           z0 + i z1 from one normal pair
//   ket:                      dim complex normals in index order, normalized
//   hermitian:                G filled row by row, M = (G + G^dag)/2
//   unitary:                  G filled row by row, then modified Gram-Schmidt
//                             over columns left to right, two orthogonalization
//                             passes per column

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

class Xoshiro256PlusPlus {
 public:
  explicit constexpr Xoshiro256PlusPlus(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : state_) word = sm.next();
  }

  constexpr std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0,1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4]{};
};

template <typename Real = double>
std::pair<Real, Real> normal_pair(Xoshiro256PlusPlus& gen) {
  const double u1 = gen.uniform();
  const double u2 = gen.uniform();
  const double r = std::sqrt(-2.0 * std::log1p(-u1));  // ln(1 - u1), never log(0)
  const double angle = 2.0 * std::numbers::pi * u2;
  return {static_cast<Real>(r * std::cos(angle)), static_cast<Real>(r * std::sin(angle))};
}

template <typename Real = double>
Complex<Real> normal_complex(Xoshiro256PlusPlus& gen) {
  const auto [re, im] = normal_pair<Real>(gen);
  return Complex<Real>(re, im);
}

namespace detail {

inline void require_dim(Index dim, const char* who) {
  if (dim < 1) {
    throw Error(Errc::validation_error, std::string(who) + ": dimension must be >= 1");
  }
}

}  // namespace detail

/// Normalized random state vector; ||psi|| = 1 up to rounding.
template <typename Real = double>
ComplexVector<Real> random_ket(Xoshiro256PlusPlus& gen, Index dim) {
  detail::require_dim(dim, "random_ket");
  ComplexVector<Real> v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = normal_complex<Real>(gen);
  return v / v.norm();
}

/// M = (G + G^dag)/2 with complex normal G; exactly Hermitian entrywise.
template <typename Real = double>
ComplexMatrix<Real> random_hermitian(Xoshiro256PlusPlus& gen, Index dim) {
  detail::require_dim(dim, "random_hermitian");
  ComplexMatrix<Real> g(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) g(i, j) = normal_complex<Real>(gen);
  return (g + g.adjoint()) / Real(2);
}

/// Orthonormalizes a complex normal matrix column by column (modified
/// Gram-Schmidt, two passes per column).
template <typename Real = double>
ComplexMatrix<Real> random_unitary(Xoshiro256PlusPlus& gen, Index dim) {
  detail::require_dim(dim, "random_unitary");
  ComplexMatrix<Real> q(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) q(i, j) = normal_complex<Real>(gen);
  for (Index k = 0; k < dim; ++k) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Index j = 0; j < k; ++j) {
        q.col(k) -= q.col(j).dot(q.col(k)) * q.col(j);
      }
    }
    q.col(k) /= q.col(k).norm();
  }
  return q;
}

// Seed-keyed forms: each call runs an independent stream derived from `seed`,
// so identical (seed, dim) inputs reproduce bit-identical output.

template <typename Real = double>
ComplexVector<Real> random_ket(std::uint64_t seed, Index dim) {
  Xoshiro256PlusPlus gen(seed);
  return random_ket<Real>(gen, dim);
}

template <typename Real = double>
ComplexMatrix<Real> random_hermitian(std::uint64_t seed, Index dim) {
  Xoshiro256PlusPlus gen(seed);
  return random_hermitian<Real>(gen, dim);
}

template <typename Real = double>
ComplexMatrix<Real> random_unitary(std::uint64_t seed, Index dim) {
  Xoshiro256PlusPlus gen(seed);
  return random_unitary<Real>(gen, dim);
}

}  // namespace weakcorr
