#include "blotless/bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "blotless/errors.hpp"
#include "blotless/matrix.hpp"

namespace blotless {

double compute_n0(int m, long omega_size) {
  if (m < 1) throw ConfigError("compute_n0: m must be >= 1");
  if (omega_size < 0) throw ConfigError("compute_n0: omega_size must be >= 0");
  return m + static_cast<double>(omega_size) / m - 1.0;
}

namespace {

// Shared shape of n1 and n2: (m-1)/(1-theta) * [1 + a + sqrt((1+a)^2 - 1)].
double bracket_bound(int m, double theta, double a) {
  const double base = (m - 1.0) / (1.0 - theta);
  const double one_plus = 1.0 + a;
  return base * (one_plus + std::sqrt(one_plus * one_plus - 1.0));
}

}  // namespace

BoundReport compute_bounds(int m, double theta, double epsilon) {
  if (m < 2) throw ConfigError("compute_bounds: m must be >= 2");
  if (!(theta > 0.0 && theta < 1.0)) {
    throw ConfigError("compute_bounds: theta must lie in (0, 1)");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ConfigError("compute_bounds: epsilon must lie in (0, 1)");
  }

  BoundReport report;
  report.m = m;
  report.theta = theta;
  report.epsilon = epsilon;
  report.n0 = std::numeric_limits<double>::quiet_NaN();

  const double log_eps = std::log(epsilon);
  const double a1 = -log_eps / (4.0 * m * (m - 1.0) * (1.0 - theta));
  report.n1 = bracket_bound(m, theta, a1);

  const double a2 =
      -(log_eps - std::log(static_cast<double>(m))) /
      (4.0 * (m - 1.0) * (1.0 - theta));
  report.n2 = bracket_bound(m, theta, a2);

  report.n3 = (log_eps - std::log(static_cast<double>(m)) -
               std::log(m - 1.0)) /
              std::log1p(-theta * (1.0 - theta));

  report.n_star = std::max(report.n2, report.n3);
  report.n_star_rounded = std::llround(report.n_star);
  return report;
}

double asymptotic_threshold(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw ConfigError("asymptotic_threshold: theta must lie in (0, 1)");
  }
  return 1.0 / (1.0 - theta);
}

std::string BoundReport::to_json() const {
  std::ostringstream out;
  out << "{\"m\":" << m << ",\"theta\":" << format_full(theta)
      << ",\"epsilon\":" << format_full(epsilon);
  if (!std::isnan(n0)) out << ",\"n0\":" << format_full(n0);
  out << ",\"n1\":" << format_full(n1) << ",\"n2\":" << format_full(n2)
      << ",\"n3\":" << format_full(n3)
      << ",\"n_star\":" << format_full(n_star)
      << ",\"n_star_rounded\":" << n_star_rounded << "}";
  return out.str();
}

std::string BoundReport::to_table() const {
  std::ostringstream out;
  out << "m        " << m << '\n'
      << "theta    " << theta << '\n'
      << "epsilon  " << epsilon << '\n';
  if (!std::isnan(n0)) out << "n0       " << n0 << '\n';
  out << "n1       " << n1 << '\n'
      << "n2       " << n2 << '\n'
      << "n3       " << n3 << '\n'
      << "n_star   " << n_star << "  (rounded " << n_star_rounded << ")\n";
  return out.str();
}

}  // namespace blotless
