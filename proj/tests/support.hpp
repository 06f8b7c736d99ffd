#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "skewlab/explorer.hpp"
#include "skewlab/hermitian.hpp"
#include "skewlab/quantities.hpp"

namespace testing {

inline bool close(double a, double b, double rel, double abs_floor = 1.0) {
  return std::abs(a - b) <= rel * std::max(abs_floor, std::max(std::abs(a), std::abs(b)));
}

inline std::filesystem::path data_dir() { return SKEWLAB_DATA_DIR; }

/// Unitary from the eigenvectors of a random Hermitian matrix.
inline skewlab::ComplexMatrix random_unitary(std::size_t d, std::uint64_t seed) {
  return skewlab::eigh(skewlab::sample_observable(d, 1.0, skewlab::SeedSpec{seed, 0x5eed}))
      .eigenvectors;
}

inline skewlab::ComplexMatrix conjugate(const skewlab::ComplexMatrix& u,
                                        const skewlab::ComplexMatrix& m) {
  auto r = u * m * u.adjoint();
  // symmetrize away rounding
  return 0.5 * (r + r.adjoint());
}

}  // namespace testing
