#ifndef BLOTLESS_SYNTH_HPP
#define BLOTLESS_SYNTH_HPP

#include <cstdint>
#include <optional>

#include "blotless/model.hpp"

namespace blotless {

// Synthetic problem instances: D0 has i.i.d. N(0, 1/m) entries, X0 has
// i.i.d. Bernoulli(theta)-Gaussian entries, Y = D0 X0 (+ scaled Gaussian
// noise when snr_db is set).
//
// Determinism contract: every generator derives its own xoshiro256++ stream
// from (seed, StreamTag) and fills matrices in row-major order (row index
// outer, column index inner), so each output is a pure function of its
// config regardless of what else ran.
struct GenConfig {
  int m = 0;
  int l = 0;
  int n = 0;
  double theta = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> snr_db;

  void check() const;  // throws ConfigError
};

Dictionary gen_dictionary(const GenConfig& cfg);

// An entry drawn nonzero stays in the support even if its Gaussian value is
// coincidentally zero.
SparseCoeffs gen_coeffs(const GenConfig& cfg);

// Y = D0 X0 exactly; with snr_db set the noise is rescaled so the Frobenius
// SNR matches snr_db exactly (an infinite snr_db behaves as unset).
TrainingSet gen_training_set(const GenConfig& cfg);

// Moves floor(r |Omega|) support entries: removed uniformly without
// replacement from the global support, replaced by entries drawn uniformly
// without replacement from the global complement. |Omega| is preserved.
SupportPattern corrupt_pattern(const SupportPattern& pattern, double r,
                               std::uint64_t seed);

// Seed for trial `trial_index` at grid point `grid_index` of an experiment.
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t grid_index,
                         std::uint64_t trial_index);

}  // namespace blotless

#endif
