#ifndef BLOTLESS_BOUNDS_HPP
#define BLOTLESS_BOUNDS_HPP

#include <string>

namespace blotless {

// Closed-form lower bounds on the number of training samples under which the
// three necessary conditions for unique recovery hold with probability at
// least 1 - epsilon (square m x m dictionary, Bernoulli(theta)-Gaussian
// coefficients). n_star = max(n2, n3) is the headline estimate.
struct BoundReport {
  int m = 0;
  double theta = 0.0;
  double epsilon = 0.0;
  // Counting bound for a realized support size; NaN unless computed via
  // compute_n0 (the closed forms below do not depend on a realized pattern).
  double n0 = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;
  double n3 = 0.0;
  double n_star = 0.0;
  long n_star_rounded = 0;

  std::string to_json() const;
  std::string to_table() const;
};

// n0 = m + |Omega| / m - 1 for a realized support of omega_size entries.
double compute_n0(int m, long omega_size);

// Evaluates the three closed forms; n_star_rounded rounds half away from
// zero (the convention matching the reference sample counts).
BoundReport compute_bounds(int m, double theta, double epsilon);

// Asymptotic threshold on n/m: above 1 / (1 - theta) all three necessary
// conditions hold with probability approaching one as m grows.
double asymptotic_threshold(double theta);

}  // namespace blotless

#endif
