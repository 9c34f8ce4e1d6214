#include <doctest.h>

#include "blotless/errors.hpp"
#include "blotless/model.hpp"
#include "test_helpers.hpp"

using namespace blotless;
using blotless::testing::random_matrix;

TEST_CASE("project_to_pattern masks, zeroes and passes through") {
  SupportPattern p(2, 2);
  p.rows = {{0}, {1}};
  const Matrix ones = Matrix::Ones(2, 2);
  SparseCoeffs masked = project_to_pattern(ones, p);
  Matrix expected(2, 2);
  expected << 1, 0, 0, 1;
  CHECK(masked.values == expected);

  SupportPattern empty(2, 2);
  CHECK(project_to_pattern(ones, empty).values == Matrix::Zero(2, 2));

  SupportPattern fullp(2, 2);
  fullp.rows = {{0, 1}, {0, 1}};
  const Matrix x = random_matrix(2, 2, 3);
  CHECK(project_to_pattern(x, fullp).values == x);

  CHECK_THROWS_AS(project_to_pattern(Matrix::Zero(3, 2), p), DimensionError);
}

TEST_CASE("project_to_pattern is idempotent") {
  const Matrix x = random_matrix(4, 6, 23);
  SupportPattern p(4, 6);
  p.rows = {{0, 2}, {}, {1, 3, 5}, {4}};
  SparseCoeffs once = project_to_pattern(x, p);
  SparseCoeffs twice = project_to_pattern(once.values, p);
  CHECK(once.values == twice.values);
}

TEST_CASE("normalize returns unit atoms and the original norms") {
  Matrix atoms(2, 2);
  atoms << 3, 0, 0, 4;
  NormalizeResult r = normalize(Dictionary(atoms));
  CHECK(r.scaling(0) == doctest::Approx(3.0));
  CHECK(r.scaling(1) == doctest::Approx(4.0));
  CHECK(r.dict.atoms.col(0).norm() == doctest::Approx(1.0));
  CHECK(r.dict.atoms.col(1).norm() == doctest::Approx(1.0));

  // Already unit norm: identity scaling, and normalize is idempotent.
  NormalizeResult again = normalize(r.dict);
  CHECK((again.scaling - Vector::Ones(2)).norm() < 1e-12);
  CHECK((again.dict.atoms - r.dict.atoms).norm() < 1e-12);
}

TEST_CASE("normalize preserves the product with rescaled coefficients") {
  const Matrix atoms = random_matrix(4, 6, 23);
  const Matrix x = random_matrix(6, 5, 24);
  NormalizeResult r = normalize(Dictionary(atoms));
  const Matrix rescaled = apply_scaling(x, r.scaling);
  CHECK((atoms * x - r.dict.atoms * rescaled).norm() <= 1e-12 * (atoms * x).norm());
}

TEST_CASE("paired diagonal rescaling leaves the product unchanged") {
  const Matrix d = random_matrix(5, 7, 31);
  const Matrix x = random_matrix(7, 9, 32);
  Xoshiro256pp rng(33);
  Vector s(7);
  for (int i = 0; i < 7; ++i) s(i) = 0.5 + 2.0 * rng.uniform();
  const Matrix scaled_d = d * s.asDiagonal();
  const Matrix unscaled_x = s.cwiseInverse().asDiagonal() * x;
  CHECK((d * x - scaled_d * unscaled_x).norm() <= 1e-10 * (d * x).norm());
}

TEST_CASE("zero atoms are rejected with the offending index") {
  Matrix atoms = random_matrix(3, 4, 41);
  atoms.col(2).setZero();
  try {
    Dictionary bad(atoms);
    FAIL("expected ZeroAtomError");
  } catch (const ZeroAtomError& e) {
    CHECK(e.atom == 2);
  }
}

TEST_CASE("sparse coeffs reject nonzeros off the pattern") {
  SupportPattern p(2, 2);
  p.rows = {{0}, {}};
  Matrix v = Matrix::Zero(2, 2);
  v(1, 1) = 5.0;
  CHECK_THROWS_AS(SparseCoeffs(v, p), DimensionError);
}

TEST_CASE("support pattern json round-trip") {
  SupportPattern p(3, 5);
  p.rows = {{0, 4}, {}, {2}};
  SupportPattern back = SupportPattern::from_json(p.to_json());
  CHECK(back.l == p.l);
  CHECK(back.n == p.n);
  CHECK(back.rows == p.rows);
  CHECK(back.size() == 3);
}
