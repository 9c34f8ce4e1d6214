#ifndef BLOTLESS_SPARSE_CODING_HPP
#define BLOTLESS_SPARSE_CODING_HPP

#include <optional>
#include <vector>

#include "blotless/model.hpp"

namespace blotless {

// Stopping rule for OMP: a cap on selected atoms, an absolute l2 residual
// threshold, or both. At least one must be set.
struct OmpConfig {
  std::optional<int> k;
  std::optional<double> residual_tol;

  void check(int l) const;  // throws ConfigError
};

struct OmpResult {
  std::vector<int> support;  // selection order
  Vector coeffs;             // least-squares values on the support
  // False when the greedy loop stalled (all remaining correlations vanish)
  // before any stopping rule fired; the partial solution is still returned.
  bool clean = true;
};

// Classical OMP on a single column: pick the atom with the largest absolute
// correlation against the residual (lowest index wins ties), re-solve least
// squares on the support, stop at k atoms, at residual <= residual_tol, or
// at residual <= 1e-12 ||y||. Requires unit-norm atoms.
OmpResult omp_encode(const Dictionary& d, const Vector& y, const OmpConfig& cfg);

// Column-wise omp_encode; errors carry the column index.
SparseCoeffs omp_encode_all(const Dictionary& d, const Matrix& y,
                            const OmpConfig& cfg);

}  // namespace blotless

#endif
