#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>

#include "blotless/errors.hpp"
#include "blotless/numerics.hpp"
#include "test_helpers.hpp"

using namespace blotless;
using blotless::testing::random_matrix;

namespace {

// Independent spectrum oracle: singular values as square roots of the
// eigenvalues of the Gram matrix, sorted non-increasing.
Vector gram_singular_values(const Matrix& a) {
  const Matrix gram = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  Vector sv = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(sv.data(), sv.data() + sv.size(), std::greater<double>());
  return sv;
}

bool moore_penrose_ok(const Matrix& a, const Matrix& p, double tol) {
  const double scale = std::max(1.0, a.norm());
  return (a * p * a - a).norm() <= tol * scale &&
         (p * a * p - p).norm() <= tol * std::max(1.0, p.norm()) &&
         ((a * p).transpose() - a * p).norm() <= tol * scale &&
         ((p * a).transpose() - p * a).norm() <= tol * scale;
}

}  // namespace

TEST_CASE("svd identity and diagonal cases") {
  SvdFactors f = svd(Matrix::Identity(3, 3));
  for (int i = 0; i < 3; ++i) CHECK(f.s(i) == doctest::Approx(1.0));

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 2.0;
  f = svd(d);
  CHECK(f.s(0) == doctest::Approx(3.0));
  CHECK(f.s(1) == doctest::Approx(2.0));
  // Signed permutation factors: every entry is 0 or +-1.
  for (const Matrix& q : {f.u, Matrix(f.vt.transpose())}) {
    CHECK((q * q.transpose() - Matrix::Identity(2, 2)).norm() < 1e-12);
    for (int i = 0; i < q.size(); ++i) {
      const double v = std::abs(*(q.data() + i));
      CHECK(std::min(v, std::abs(v - 1.0)) < 1e-12);
    }
  }
}

TEST_CASE("svd matches the Gram-matrix spectrum oracle") {
  const Matrix a = random_matrix(4, 3, 7);
  SvdFactors f = svd(a);
  const Vector oracle = gram_singular_values(a);
  REQUIRE(f.s.size() == oracle.size());
  for (int i = 0; i < oracle.size(); ++i) {
    CHECK(f.s(i) == doctest::Approx(oracle(i)).epsilon(1e-10));
  }
}

TEST_CASE("svd reconstruction and ordering invariants") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const int rows = 2 + static_cast<int>(seed % 5);
    const int cols = 2 + static_cast<int>((3 * seed) % 5);
    const Matrix a = random_matrix(rows, cols, 100 + seed);
    SvdFactors f = svd(a);
    CHECK((f.reconstruct() - a).norm() <=
          1e-8 * f.s(0) * std::max(rows, cols));
    for (int i = 0; i + 1 < f.s.size(); ++i) CHECK(f.s(i) >= f.s(i + 1));
    CHECK((f.u.transpose() * f.u -
           Matrix::Identity(f.s.size(), f.s.size()))
              .norm() < 1e-12);
  }
}

TEST_CASE("svd is deterministic") {
  const Matrix a = random_matrix(6, 4, 42);
  SvdFactors f1 = svd(a);
  SvdFactors f2 = svd(a);
  CHECK(f1.u == f2.u);
  CHECK(f1.s == f2.s);
  CHECK(f1.vt == f2.vt);
}

TEST_CASE("least_squares trivial cases") {
  const Matrix b = random_matrix(2, 3, 9);
  CHECK((least_squares(Matrix::Identity(2, 2), b) - b).norm() < 1e-14);

  Matrix ones(2, 1);
  ones << 1, 1;
  Matrix rhs(2, 1);
  rhs << 0, 2;
  CHECK(least_squares(ones, rhs)(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("least_squares normal equations on an overdetermined system") {
  const Matrix a = random_matrix(6, 3, 11);
  const Matrix b = random_matrix(6, 2, 12);
  const Matrix x = least_squares(a, b);
  CHECK((a.transpose() * (a * x - b)).norm() < 1e-8);
}

TEST_CASE("least_squares optimality under random perturbations") {
  const Matrix a = random_matrix(7, 4, 13);
  const Matrix b = random_matrix(7, 1, 14);
  const Matrix x = least_squares(a, b);
  const double best = (a * x - b).norm();
  for (std::uint64_t t = 0; t < 20; ++t) {
    Matrix dir = random_matrix(4, 1, 200 + t);
    dir *= 1e-3 / dir.norm();
    CHECK((a * (x + dir) - b).norm() >= best - 1e-12);
  }
}

TEST_CASE("least_squares rejects row mismatch") {
  CHECK_THROWS_AS(least_squares(Matrix::Identity(3, 3), Matrix::Zero(2, 1)),
                  DimensionError);
}

TEST_CASE("least_squares minimum-norm solution on rank-deficient systems") {
  Matrix a = random_matrix(5, 2, 15);
  Matrix wide(5, 4);
  wide << a, a;  // rank 2
  const Matrix b = random_matrix(5, 1, 16);
  const Matrix x = least_squares(wide, b);
  Matrix null_dir(4, 1);
  null_dir << 1, 0, -1, 0;
  for (double step : {-0.1, 0.1, 1.0}) {
    const Matrix shifted = x + step * null_dir;
    CHECK((wide * shifted - b).norm() ==
          doctest::Approx((wide * x - b).norm()));
    CHECK(shifted.norm() >= x.norm() - 1e-12);
  }
}

TEST_CASE("pseudo_inverse identities") {
  CHECK((pseudo_inverse(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3))
            .norm() < 1e-14);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0;
  Matrix p = pseudo_inverse(d);
  CHECK(p(0, 0) == doctest::Approx(0.5));
  CHECK(std::abs(p(1, 1)) < 1e-14);

  const Matrix a = random_matrix(3, 5, 13);
  CHECK(moore_penrose_ok(a, pseudo_inverse(a), 1e-8));
}

TEST_CASE("truncate_rank") {
  const Matrix u = random_matrix(4, 1, 17);
  const Matrix v = random_matrix(3, 1, 18);
  const Matrix rank1 = u * v.transpose();
  CHECK((truncate_rank(rank1, 1) - rank1).norm() < 1e-10 * rank1.norm());

  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3, 2, 1;
  Matrix t = truncate_rank(d, 2);
  Matrix expected = d;
  expected(2, 2) = 0;
  CHECK((t - expected).norm() < 1e-12);

  CHECK_THROWS_AS(truncate_rank(d, 4), ConfigError);
  CHECK_THROWS_AS(truncate_rank(d, 0), ConfigError);
}

TEST_CASE("truncate_rank achieves the Eckart-Young error") {
  const Matrix a = random_matrix(5, 5, 17);
  const Vector sv = gram_singular_values(a);
  const Matrix t = truncate_rank(a, 3);
  const double err2 = (a - t).squaredNorm();
  const double tail = sv(3) * sv(3) + sv(4) * sv(4);
  CHECK(err2 == doctest::Approx(tail).epsilon(1e-8));
}

TEST_CASE("solve_eq_qp pinned examples") {
  // min ||x||^2 s.t. x1 + x2 = 2 -> (1, 1).
  Matrix a(1, 2);
  a << 1, 1;
  Vector sol = solve_eq_qp(Vector::Ones(2), Vector::Zero(2), a,
                           Vector::Constant(1, 2.0));
  CHECK(sol(0) == doctest::Approx(1.0));
  CHECK(sol(1) == doctest::Approx(1.0));

  // min ||x - (3, 0)||^2 s.t. x2 = 1 -> (3, 1).
  Matrix a2(1, 2);
  a2 << 0, 1;
  Vector g(2);
  g << 3, 0;
  sol = solve_eq_qp(Vector::Ones(2), g, a2, Vector::Ones(1));
  CHECK(sol(0) == doctest::Approx(3.0));
  CHECK(sol(1) == doctest::Approx(1.0));
}

TEST_CASE("solve_eq_qp matches the dense KKT least-squares oracle") {
  Xoshiro256pp rng(19);
  Vector h(5);
  for (int i = 0; i < 5; ++i) h(i) = 0.5 + rng.uniform();
  const Vector g = random_matrix(5, 1, 20).col(0);
  const Matrix a = random_matrix(2, 5, 21);
  const Vector b = random_matrix(2, 1, 22).col(0);
  const Vector sol = solve_eq_qp(h, g, a, b);

  Matrix kkt = Matrix::Zero(7, 7);
  kkt.topLeftCorner(5, 5).diagonal() = h;
  kkt.topRightCorner(5, 2) = a.transpose();
  kkt.bottomLeftCorner(2, 5) = a;
  Vector rhs(7);
  rhs.head(5) = g;
  rhs.tail(2) = b;
  const Vector oracle = least_squares(kkt, rhs).col(0).head(5);
  CHECK((sol - oracle).norm() < 1e-8 * std::max(1.0, oracle.norm()));
}

TEST_CASE("solve_eq_qp rejects rank-deficient constraints") {
  Matrix a(2, 3);
  a << 1, 1, 0, 2, 2, 0;  // duplicated constraint direction
  CHECK_THROWS_AS(
      solve_eq_qp(Vector::Ones(3), Vector::Zero(3), a, Vector::Zero(2)),
      DegenerateConstraintError);
}
