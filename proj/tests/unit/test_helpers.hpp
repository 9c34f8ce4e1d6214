#ifndef BLOTLESS_TEST_HELPERS_HPP
#define BLOTLESS_TEST_HELPERS_HPP

#include "blotless/matrix.hpp"
#include "blotless/rng.hpp"

namespace blotless::testing {

// Seeded Gaussian matrix for tests, independent of the library generators.
inline Matrix random_matrix(int rows, int cols, std::uint64_t seed,
                            double scale = 1.0) {
  Xoshiro256pp rng(seed);
  Matrix a(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) a(i, j) = scale * rng.gaussian();
  }
  return a;
}

inline Matrix random_unit_columns(int rows, int cols, std::uint64_t seed) {
  Matrix a = random_matrix(rows, cols, seed);
  for (int j = 0; j < cols; ++j) a.col(j) /= a.col(j).norm();
  return a;
}

}  // namespace blotless::testing

#endif
