#include <doctest.h>

#include <cmath>

#include "blotless/errors.hpp"
#include "blotless/metrics.hpp"
#include "test_helpers.hpp"

using namespace blotless;
using blotless::testing::random_matrix;
using blotless::testing::random_unit_columns;

TEST_CASE("recovery_error is zero for identical dictionaries") {
  Dictionary d(random_unit_columns(6, 8, 1));
  CHECK(recovery_error(d, d).r_err == doctest::Approx(0.0));
}

TEST_CASE("recovery_error absorbs permutation, sign and scale") {
  Dictionary d0(random_unit_columns(6, 8, 2));
  Matrix shuffled(6, 8);
  const int perm[8] = {3, 1, 7, 0, 5, 2, 6, 4};
  Xoshiro256pp rng(3);
  for (int j = 0; j < 8; ++j) {
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const double scale = 0.5 + 2.0 * rng.uniform();
    shuffled.col(j) = sign * scale * d0.atoms.col(perm[j]);
  }
  CHECK(recovery_error(Dictionary(shuffled), d0).r_err < 1e-12);
  CHECK(is_exact_recovery(Dictionary(shuffled), d0));
}

TEST_CASE("hand-computed greedy matching: duplicate atom forces error 0.5") {
  Matrix d0 = Matrix::Identity(2, 2);
  Matrix d_hat(2, 2);
  d_hat << 1, 1, 0, 0;  // both estimated atoms equal e1
  RecoveryError r = recovery_error(Dictionary(d_hat), Dictionary(d0));
  CHECK(r.r_err == doctest::Approx(0.5));
  CHECK(r.matching[0] == 0);  // p=1 claims atom 1 with |ip| = 1
  CHECK(r.matching[1] == 1);  // p=2 is forced onto atom 2 with |ip| = 0
}

TEST_CASE("tiny perturbations stay under the exact-recovery tolerance") {
  Dictionary d0(random_unit_columns(8, 8, 4));
  Matrix perturbed = d0.atoms + 1e-9 * random_matrix(8, 8, 5);
  CHECK(is_exact_recovery(Dictionary(perturbed), d0, 1e-6));
  CHECK_FALSE(is_exact_recovery(Dictionary(random_unit_columns(8, 8, 6)), d0,
                                1e-6));
}

TEST_CASE("independent random dictionaries score far from zero") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Dictionary a(random_unit_columns(16, 16, 1000 + seed));
    Dictionary b(random_unit_columns(16, 16, 5000 + seed));
    CHECK(recovery_error(a, b).r_err > 0.5);
  }
}

TEST_CASE("recovery_error rejects shape mismatch") {
  Dictionary a(random_unit_columns(4, 4, 7));
  Dictionary b(random_unit_columns(4, 5, 8));
  CHECK_THROWS_AS(recovery_error(a, b), DimensionError);
}

TEST_CASE("psnr formula and sentinels") {
  const Matrix img = random_matrix(16, 16, 9);
  CHECK(std::isinf(psnr(img, img)));

  const Matrix offset16 = img.array() + 16.0;
  CHECK(psnr(img, offset16) ==
        doctest::Approx(10.0 * std::log10(255.0 * 255.0 / 256.0))
            .epsilon(1e-12));

  const Matrix offset255 = img.array() + 255.0;
  CHECK(psnr(img, offset255) == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(psnr(img, Matrix::Zero(4, 4)), DimensionError);
}
