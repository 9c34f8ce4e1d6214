#include "blotless/rng.hpp"

#include <cmath>

namespace blotless {

double Xoshiro256pp::gaussian() {
  const double u1 = uniform();
  const double u2 = uniform();
  // 1 - u1 lies in (0, 1], keeping the log argument away from zero.
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  return r * std::cos(2.0 * M_PI * u2);
}

std::uint64_t Xoshiro256pp::uniform_below(std::uint64_t bound) {
  if (bound == 0) return 0;
  const std::uint64_t threshold = (0ULL - bound) % bound;
  for (;;) {
    const std::uint64_t x = next();
    if (x >= threshold) return x % bound;
  }
}

}  // namespace blotless
