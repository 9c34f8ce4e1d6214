#ifndef BLOTLESS_MATRIX_HPP
#define BLOTLESS_MATRIX_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

namespace blotless {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Throws DimensionError on empty shapes and NumericalError on NaN/Inf
// entries. Call sites that construct matrices from external input or from
// iterative solvers use this as the type-level finiteness invariant.
void require_finite(const Matrix& a, const char* what);

// Dense matrix text format used across the repo and the CLI:
//   line 1:        "<rows> <cols>"
//   lines 2..r+1:  cols space-separated decimals, 17 significant digits.
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const Matrix& a);
void write_matrix_file(const std::string& path, const Matrix& a);

// 17-significant-digit decimal formatting shared by the matrix and CSV
// writers, so numbers round-trip exactly.
std::string format_full(double v);

}  // namespace blotless

#endif
