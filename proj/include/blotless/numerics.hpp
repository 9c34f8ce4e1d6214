#ifndef BLOTLESS_NUMERICS_HPP
#define BLOTLESS_NUMERICS_HPP

#include "blotless/matrix.hpp"

namespace blotless {

// Global relative cutoff: singular values below kRankRelTol * s_max count as
// zero wherever rank matters (pseudo-inverse, minimum-norm solves, null-space
// and ambiguity checks). One shared constant keeps all kernels consistent.
inline constexpr double kRankRelTol = 1e-12;

struct SvdFactors {
  Matrix u;   // orthonormal columns, rows(a) x r
  Vector s;   // non-increasing, length r = min(rows, cols)
  Matrix vt;  // orthonormal rows, r x cols(a)

  Matrix reconstruct() const { return u * s.asDiagonal() * vt; }
  int rank(double rel_tol = kRankRelTol) const;
};

// Thin SVD. Deterministic: identical input bits give identical factors.
// Throws NumericalError if the decomposition fails to converge.
SvdFactors svd(const Matrix& a);

// Minimizer of ||a x - b||_F; the minimum-norm solution when a is rank
// deficient (singular values under the global cutoff are dropped).
Matrix least_squares(const Matrix& a, const Matrix& b);

// Moore-Penrose pseudo-inverse with the global rank cutoff.
Matrix pseudo_inverse(const Matrix& a);

// Best rank-r approximation in Frobenius norm (top-r singular triplets).
Matrix truncate_rank(const Matrix& a, int r);

// Minimize 0.5 z' diag(hessian_diag) z - linear' z subject to
// constraints * z = rhs, via the dense KKT system
//   [ diag(h)  A' ] [ z      ]   [ linear ]
//   [ A        0  ] [ lambda ] = [ rhs    ].
// hessian_diag must be elementwise nonnegative. Throws
// DegenerateConstraintError when the constraint rows are rank deficient and
// NumericalError when the KKT matrix itself is singular.
Vector solve_eq_qp(const Vector& hessian_diag, const Vector& linear,
                   const Matrix& constraints, const Vector& rhs);

}  // namespace blotless

#endif
