#include "blotless/synth.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "blotless/errors.hpp"
#include "blotless/rng.hpp"

namespace blotless {

void GenConfig::check() const {
  if (m < 1 || l < 1 || n < 1) {
    throw ConfigError("GenConfig: m, l, n must be positive");
  }
  if (!(theta > 0.0 && theta < 1.0)) {
    throw ConfigError("GenConfig: theta must lie strictly inside (0, 1)");
  }
}

Dictionary gen_dictionary(const GenConfig& cfg) {
  cfg.check();
  Xoshiro256pp rng(stream_seed(cfg.seed, StreamTag::kDictionary));
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.m));
  Matrix atoms(cfg.m, cfg.l);
  for (int i = 0; i < cfg.m; ++i) {
    for (int j = 0; j < cfg.l; ++j) {
      atoms(i, j) = scale * rng.gaussian();
    }
  }
  return Dictionary(std::move(atoms));
}

SparseCoeffs gen_coeffs(const GenConfig& cfg) {
  cfg.check();
  Xoshiro256pp rng(stream_seed(cfg.seed, StreamTag::kCoeffs));
  SupportPattern pattern(cfg.l, cfg.n);
  Matrix values = Matrix::Zero(cfg.l, cfg.n);
  for (int i = 0; i < cfg.l; ++i) {
    for (int j = 0; j < cfg.n; ++j) {
      if (rng.uniform() < cfg.theta) {
        values(i, j) = rng.gaussian();
        pattern.rows[i].push_back(j);
      }
    }
  }
  SparseCoeffs coeffs;
  coeffs.values = std::move(values);
  coeffs.pattern = std::move(pattern);
  return coeffs;
}

TrainingSet gen_training_set(const GenConfig& cfg) {
  cfg.check();
  TrainingSet set;
  set.seed = cfg.seed;
  set.theta = cfg.theta;
  Dictionary d0 = gen_dictionary(cfg);
  SparseCoeffs x0 = gen_coeffs(cfg);
  set.samples = d0.atoms * x0.values;

  const bool noisy = cfg.snr_db.has_value() && std::isfinite(*cfg.snr_db);
  if (noisy) {
    const double signal = set.samples.norm();
    if (signal == 0.0) {
      throw DegenerateDataError(
          "gen_training_set: zero signal, cannot impose an SNR");
    }
    Xoshiro256pp rng(stream_seed(cfg.seed, StreamTag::kNoise));
    Matrix w(cfg.m, cfg.n);
    for (int i = 0; i < cfg.m; ++i) {
      for (int j = 0; j < cfg.n; ++j) w(i, j) = rng.gaussian();
    }
    // 10 log10(||Y||^2 / ||scale W||^2) == snr_db exactly.
    const double scale =
        signal / (w.norm() * std::pow(10.0, *cfg.snr_db / 20.0));
    set.samples += scale * w;
    set.snr_db = cfg.snr_db;
  }
  set.true_dictionary = std::move(d0);
  set.true_coeffs = std::move(x0);
  return set;
}

namespace {

// First k elements of a seeded uniform partial shuffle of [0, pool_size).
std::vector<std::size_t> sample_without_replacement(std::size_t pool_size,
                                                    std::size_t k,
                                                    Xoshiro256pp& rng) {
  std::vector<std::size_t> pool(pool_size);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t swap_with =
        t + static_cast<std::size_t>(rng.uniform_below(pool_size - t));
    std::swap(pool[t], pool[swap_with]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace

SupportPattern corrupt_pattern(const SupportPattern& pattern, double r,
                               std::uint64_t seed) {
  pattern.check();
  if (r < 0.0 || r > 1.0) throw ConfigError("corrupt_pattern: r outside [0, 1]");

  std::vector<std::pair<int, int>> on, off;
  for (int i = 0; i < pattern.l; ++i) {
    const auto& row = pattern.rows[i];
    std::size_t next = 0;
    for (int j = 0; j < pattern.n; ++j) {
      if (next < row.size() && row[next] == j) {
        on.emplace_back(i, j);
        ++next;
      } else {
        off.emplace_back(i, j);
      }
    }
  }

  const std::size_t moves = static_cast<std::size_t>(
      std::floor(r * static_cast<double>(on.size())));
  if (moves > off.size()) {
    throw ConfigError("corrupt_pattern: not enough off-support slots (" +
                      std::to_string(off.size()) + ") for " +
                      std::to_string(moves) + " moves");
  }
  if (moves == 0) return pattern;

  Xoshiro256pp rng(stream_seed(seed, StreamTag::kCorrupt));
  const auto removed = sample_without_replacement(on.size(), moves, rng);
  const auto added = sample_without_replacement(off.size(), moves, rng);

  std::vector<std::vector<bool>> mask(pattern.l,
                                      std::vector<bool>(pattern.n, false));
  for (int i = 0; i < pattern.l; ++i) {
    for (int j : pattern.rows[i]) mask[i][j] = true;
  }
  for (std::size_t idx : removed) mask[on[idx].first][on[idx].second] = false;
  for (std::size_t idx : added) mask[off[idx].first][off[idx].second] = true;

  SupportPattern result(pattern.l, pattern.n);
  for (int i = 0; i < pattern.l; ++i) {
    for (int j = 0; j < pattern.n; ++j) {
      if (mask[i][j]) result.rows[i].push_back(j);
    }
  }
  return result;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t grid_index,
                         std::uint64_t trial_index) {
  return mix_seed(mix_seed(base_seed, grid_index), trial_index);
}

}  // namespace blotless
