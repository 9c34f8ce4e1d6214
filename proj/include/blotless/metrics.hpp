#ifndef BLOTLESS_METRICS_HPP
#define BLOTLESS_METRICS_HPP

#include <vector>

#include "blotless/model.hpp"

namespace blotless {

struct RecoveryError {
  double r_err = 0.0;
  // matching[p] = index of the ground-truth atom greedily assigned to
  // estimated atom p.
  std::vector<int> matching;
};

// Greedy-matching dictionary discrepancy: estimated atoms are visited in
// index order, each claims the unmatched ground-truth atom with the largest
// absolute inner product (lowest index on ties), and the complements
// 1 - |<d_hat_p, d0_jp>| are averaged. Both dictionaries are column
// normalized internally, so the metric ignores sign, permutation and scale.
RecoveryError recovery_error(const Dictionary& d_hat, const Dictionary& d0);

bool is_exact_recovery(const Dictionary& d_hat, const Dictionary& d0,
                       double tol = 1e-6);

// 10 log10(peak^2 / MSE) in dB; +infinity for identical inputs.
double psnr(const Matrix& reference, const Matrix& test, double peak = 255.0);

}  // namespace blotless

#endif
