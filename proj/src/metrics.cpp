#include "blotless/metrics.hpp"

#include <cmath>
#include <limits>

#include "blotless/errors.hpp"

namespace blotless {

RecoveryError recovery_error(const Dictionary& d_hat, const Dictionary& d0) {
  if (d_hat.m() != d0.m() || d_hat.l() != d0.l()) {
    throw DimensionError("recovery_error: dictionary shapes differ");
  }
  const Matrix a = normalize(d_hat).dict.atoms;
  const Matrix b = normalize(d0).dict.atoms;
  const int l = d0.l();

  RecoveryError result;
  result.matching.resize(l, -1);
  std::vector<char> taken(l, 0);
  double total = 0.0;
  for (int p = 0; p < l; ++p) {
    int best = -1;
    double best_ip = -1.0;
    for (int j = 0; j < l; ++j) {
      if (taken[j]) continue;
      const double ip = std::abs(a.col(p).dot(b.col(j)));
      if (ip > best_ip) {
        best_ip = ip;
        best = j;
      }
    }
    taken[best] = 1;
    result.matching[p] = best;
    total += 1.0 - std::min(best_ip, 1.0);
  }
  result.r_err = total / l;
  return result;
}

bool is_exact_recovery(const Dictionary& d_hat, const Dictionary& d0,
                       double tol) {
  return recovery_error(d_hat, d0).r_err <= tol;
}

double psnr(const Matrix& reference, const Matrix& test, double peak) {
  if (reference.rows() != test.rows() || reference.cols() != test.cols()) {
    throw DimensionError("psnr: image shapes differ");
  }
  const double mse = (reference - test).squaredNorm() /
                     static_cast<double>(reference.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

}  // namespace blotless
