#include "blotless/sparse_coding.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "blotless/errors.hpp"
#include "blotless/numerics.hpp"

namespace blotless {

void OmpConfig::check(int l) const {
  if (!k && !residual_tol) {
    throw ConfigError("OmpConfig: set k and/or residual_tol");
  }
  if (k && (*k < 1 || *k > l)) {
    throw ConfigError("OmpConfig: k must lie in [1, l]");
  }
  if (residual_tol && *residual_tol < 0.0) {
    throw ConfigError("OmpConfig: residual_tol must be >= 0");
  }
}

namespace {

void require_unit_atoms(const Dictionary& d) {
  for (int j = 0; j < d.l(); ++j) {
    if (std::abs(d.atoms.col(j).norm() - 1.0) > 1e-8) {
      throw ConfigError("omp_encode: atom " + std::to_string(j) +
                        " is not unit norm");
    }
  }
}

}  // namespace

OmpResult omp_encode(const Dictionary& d, const Vector& y, const OmpConfig& cfg) {
  cfg.check(d.l());
  require_unit_atoms(d);
  if (y.size() != d.m()) throw DimensionError("omp_encode: y size != m");

  OmpResult result;
  const double y_norm = y.norm();
  const double early_exit = 1e-12 * y_norm;
  if (y_norm == 0.0) {
    result.coeffs = Vector(0);
    return result;
  }

  const int max_atoms = cfg.k ? *cfg.k : d.l();
  std::vector<char> selected(d.l(), 0);
  Vector residual = y;
  double residual_norm = y_norm;
  Matrix sub(d.m(), max_atoms);
  Vector coeffs;

  while (static_cast<int>(result.support.size()) < max_atoms) {
    if (residual_norm <= early_exit) break;
    if (cfg.residual_tol && residual_norm <= *cfg.residual_tol) break;

    const Vector corr = d.atoms.transpose() * residual;
    int best = -1;
    double best_abs = 0.0;
    for (int j = 0; j < d.l(); ++j) {
      if (selected[j]) continue;
      const double a = std::abs(corr(j));
      if (a > best_abs) {
        best_abs = a;
        best = j;
      }
    }
    if (best < 0 || best_abs == 0.0) {
      // Residual is orthogonal to every unselected atom; greedy cannot
      // proceed. Flag the partial result.
      result.clean = false;
      break;
    }

    selected[best] = 1;
    sub.col(static_cast<int>(result.support.size())) = d.atoms.col(best);
    result.support.push_back(best);

    const int count = static_cast<int>(result.support.size());
    coeffs = least_squares(sub.leftCols(count), y);
    const double new_norm = (y - sub.leftCols(count) * coeffs).norm();
    assert(new_norm <= residual_norm + 1e-9 * y_norm);
    residual = y - sub.leftCols(count) * coeffs;
    residual_norm = new_norm;
  }

  result.coeffs = coeffs;
  return result;
}

SparseCoeffs omp_encode_all(const Dictionary& d, const Matrix& y,
                            const OmpConfig& cfg) {
  cfg.check(d.l());
  if (y.rows() != d.m()) throw DimensionError("omp_encode_all: y rows != m");

  SupportPattern pattern(d.l(), static_cast<int>(y.cols()));
  Matrix values = Matrix::Zero(d.l(), y.cols());
  for (int j = 0; j < y.cols(); ++j) {
    OmpResult col;
    try {
      col = omp_encode(d, y.col(j), cfg);
    } catch (const Error& e) {
      throw NumericalError("omp_encode_all: column " + std::to_string(j) +
                           ": " + e.what());
    }
    for (std::size_t t = 0; t < col.support.size(); ++t) {
      values(col.support[t], j) = col.coeffs(static_cast<int>(t));
    }
  }
  pattern = SupportPattern::from_nonzeros(values);
  SparseCoeffs out;
  out.values = std::move(values);
  out.pattern = std::move(pattern);
  return out;
}

}  // namespace blotless
