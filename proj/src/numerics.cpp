#include "blotless/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <string>

#include "blotless/errors.hpp"

namespace blotless {

int SvdFactors::rank(double rel_tol) const {
  if (s.size() == 0) return 0;
  const double cutoff = rel_tol * s(0);
  int r = 0;
  while (r < s.size() && s(r) > cutoff) ++r;
  return r;
}

SvdFactors svd(const Matrix& a) {
  require_finite(a, "svd");
  Eigen::BDCSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) {
    throw NumericalError("svd: decomposition did not converge");
  }
  SvdFactors f;
  f.u = dec.matrixU();
  f.s = dec.singularValues();
  f.vt = dec.matrixV().transpose();
  return f;
}

namespace {

// x = V s^+ U' b with the global rank cutoff.
Matrix apply_pinv(const SvdFactors& f, const Matrix& b) {
  const double cutoff = f.s.size() ? kRankRelTol * f.s(0) : 0.0;
  Vector inv = Vector::Zero(f.s.size());
  for (int i = 0; i < f.s.size(); ++i) {
    if (f.s(i) > cutoff) inv(i) = 1.0 / f.s(i);
  }
  return f.vt.transpose() * (inv.asDiagonal() * (f.u.transpose() * b));
}

}  // namespace

Matrix least_squares(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("least_squares: a has " + std::to_string(a.rows()) +
                         " rows, b has " + std::to_string(b.rows()));
  }
  return apply_pinv(svd(a), b);
}

Matrix pseudo_inverse(const Matrix& a) {
  SvdFactors f = svd(a);
  return apply_pinv(f, Matrix::Identity(a.rows(), a.rows()));
}

Matrix truncate_rank(const Matrix& a, int r) {
  if (r < 1 || r > std::min(a.rows(), a.cols())) {
    throw ConfigError("truncate_rank: r = " + std::to_string(r) +
                      " outside [1, min(rows, cols)]");
  }
  SvdFactors f = svd(a);
  return f.u.leftCols(r) * f.s.head(r).asDiagonal() * f.vt.topRows(r);
}

Vector solve_eq_qp(const Vector& hessian_diag, const Vector& linear,
                   const Matrix& constraints, const Vector& rhs) {
  const long nvar = hessian_diag.size();
  const long ncon = constraints.rows();
  if (linear.size() != nvar || constraints.cols() != nvar ||
      rhs.size() != ncon) {
    throw DimensionError("solve_eq_qp: inconsistent dimensions");
  }
  if ((hessian_diag.array() < 0.0).any()) {
    throw ConfigError("solve_eq_qp: hessian diagonal must be nonnegative");
  }

  Eigen::ColPivHouseholderQR<Matrix> qr(constraints.transpose());
  qr.setThreshold(kRankRelTol);
  if (qr.rank() < ncon) {
    throw DegenerateConstraintError(
        "solve_eq_qp: constraint jacobian rank " + std::to_string(qr.rank()) +
        " < " + std::to_string(ncon));
  }

  const long dim = nvar + ncon;
  Matrix kkt = Matrix::Zero(dim, dim);
  kkt.topLeftCorner(nvar, nvar).diagonal() = hessian_diag;
  kkt.topRightCorner(nvar, ncon) = constraints.transpose();
  kkt.bottomLeftCorner(ncon, nvar) = constraints;
  Vector full_rhs(dim);
  full_rhs.head(nvar) = linear;
  full_rhs.tail(ncon) = rhs;

  Eigen::PartialPivLU<Matrix> lu(kkt);
  Vector sol = lu.solve(full_rhs);
  const double resid = (kkt * sol - full_rhs).norm();
  const double scale = std::max(1.0, full_rhs.norm());
  if (!sol.allFinite() || resid > 1e-8 * scale) {
    throw NumericalError("solve_eq_qp: KKT system singular or ill-conditioned"
                         " (residual " + format_full(resid) + ")");
  }
  return sol.head(nvar);
}

}  // namespace blotless
