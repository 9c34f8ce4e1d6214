#ifndef BLOTLESS_EXPERIMENTS_HPP
#define BLOTLESS_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "blotless/dict_update.hpp"

namespace blotless {

enum class ExperimentKind {
  kPhaseTransition,
  kLearnCurve,
  kPatternRobustness,
  kBlockSizeSweep,
  kRuntimeBench,
  kBoundsTable,
  kDenoise,
};

const char* to_string(ExperimentKind kind);

// One experiment description. Grids left empty are filled with desk-scale
// defaults by make_default_spec / finalize(); `full` switches the defaults
// to the reference scale (slower).
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kPhaseTransition;
  std::vector<int> m_grid;
  std::vector<int> l_grid;  // paired with m_grid entries (same length or 1:n)
  std::vector<int> n_grid;
  std::vector<double> theta_grid;
  std::vector<double> r_grid;
  std::vector<double> sigma_grid;
  std::vector<UpdateKind> methods;
  std::vector<int> block_sizes;
  std::optional<double> snr_db;
  double epsilon = 0.01;
  int trials = 50;
  int n_iterations = 50;
  int omp_k = 0;  // 0: round(theta * l)
  int stls_max_iters = 10;
  std::uint64_t base_seed = 1;
  int threads = 1;
  bool full = false;
  std::string image_dir = "data";
  // Denoise training parameters.
  int train_patches = 500;
  int patch = 8;
  int dict_atoms = 128;
  double train_theta = 10.0 / 128.0;

  std::string to_json() const;
  static ExperimentSpec from_json(const std::string& text);

  // Fill empty grids with the defaults for `kind` (desk scale, or reference
  // scale when full is set) and validate.
  void finalize();
};

ExperimentSpec make_default_spec(ExperimentKind kind, bool full = false);

struct ResultRow {
  std::string grid;    // canonical "key=value;..." description
  int trial = -1;      // -1 for aggregates
  int iteration = -1;  // -1 when not applicable
  std::string metric;
  double value = 0.0;
  double seconds = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;

  // Canonically sorted CSV: grid,trial,iteration,metric,value,seconds.
  // Values are bit-reproducible for a given spec and base_seed regardless of
  // thread count; the seconds column is wall-clock measurement and is not.
  void write_csv(std::ostream& out) const;
  void write_csv_file(const std::string& path) const;
  void sort_rows();
};

ExperimentResult run_phase_transition(const ExperimentSpec& spec);
ExperimentResult run_learn_curve(const ExperimentSpec& spec);
ExperimentResult run_pattern_robustness(const ExperimentSpec& spec);
ExperimentResult run_block_size_sweep(const ExperimentSpec& spec);
ExperimentResult run_runtime_bench(const ExperimentSpec& spec);
ExperimentResult run_bounds_table(const ExperimentSpec& spec);
ExperimentResult run_denoise(const ExperimentSpec& spec);

ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace blotless

#endif
