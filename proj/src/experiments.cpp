#include "blotless/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "blotless/bounds.hpp"
#include "blotless/errors.hpp"
#include "blotless/imaging.hpp"
#include "blotless/metrics.hpp"
#include "blotless/numerics.hpp"
#include "blotless/rng.hpp"
#include "blotless/synth.hpp"

namespace blotless {

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kPhaseTransition: return "phase_transition";
    case ExperimentKind::kLearnCurve: return "learn_curve";
    case ExperimentKind::kPatternRobustness: return "pattern_robustness";
    case ExperimentKind::kBlockSizeSweep: return "block_size_sweep";
    case ExperimentKind::kRuntimeBench: return "runtime_bench";
    case ExperimentKind::kBoundsTable: return "bounds_table";
    case ExperimentKind::kDenoise: return "denoise";
  }
  return "?";
}

namespace {

ExperimentKind kind_from_string(const std::string& name) {
  for (ExperimentKind kind :
       {ExperimentKind::kPhaseTransition, ExperimentKind::kLearnCurve,
        ExperimentKind::kPatternRobustness, ExperimentKind::kBlockSizeSweep,
        ExperimentKind::kRuntimeBench, ExperimentKind::kBoundsTable,
        ExperimentKind::kDenoise}) {
    if (name == to_string(kind)) return kind;
  }
  throw ConfigError("unknown experiment kind: " + name);
}

// Canonical grid-point label with a fixed key order so sorted CSVs are
// stable across runs and thread counts.
class GridLabel {
public:
  GridLabel& add(const std::string& key, long v) {
    parts_.push_back(key + "=" + std::to_string(v));
    return *this;
  }
  GridLabel& add(const std::string& key, int v) {
    return add(key, static_cast<long>(v));
  }
  GridLabel& add(const std::string& key, double v) {
    parts_.push_back(key + "=" + format_full(v));
    return *this;
  }
  GridLabel& add(const std::string& key, const std::string& v) {
    parts_.push_back(key + "=" + v);
    return *this;
  }
  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) out += ';';
      out += parts_[i];
    }
    return out;
  }

private:
  std::vector<std::string> parts_;
};

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn) {
  const int workers =
      std::max(1, static_cast<int>(
                      std::min<std::size_t>(std::max(threads, 1), count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t h = values.size() / 2;
  if (values.size() % 2) return values[h];
  return 0.5 * (values[h - 1] + values[h]);
}

double mean(const std::vector<double>& values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

int default_omp_k(const ExperimentSpec& spec, double theta, int l) {
  if (spec.omp_k > 0) return spec.omp_k;
  return std::max(1, static_cast<int>(std::lround(theta * l)));
}

LearnConfig make_learn_config(const ExperimentSpec& spec, UpdateKind kind,
                              double theta, int l, std::uint64_t seed,
                              int block_size = 0) {
  LearnConfig cfg;
  cfg.method.kind = kind;
  cfg.method.block_size = block_size;
  cfg.method.stls_max_iters = spec.stls_max_iters;
  cfg.omp.k = default_omp_k(spec, theta, l);
  cfg.n_iterations = spec.n_iterations;
  cfg.seed = seed;
  cfg.l = l;
  return cfg;
}

}  // namespace

void ExperimentSpec::finalize() {
  const ExperimentSpec defaults = make_default_spec(kind, full);
  if (m_grid.empty()) m_grid = defaults.m_grid;
  if (l_grid.empty()) l_grid = defaults.l_grid;
  if (theta_grid.empty()) theta_grid = defaults.theta_grid;
  if (n_grid.empty()) n_grid = defaults.n_grid;
  if (r_grid.empty()) r_grid = defaults.r_grid;
  if (sigma_grid.empty()) sigma_grid = defaults.sigma_grid;
  if (methods.empty()) methods = defaults.methods;
  if (block_sizes.empty()) block_sizes = defaults.block_sizes;
  if (trials < 1) throw ConfigError("ExperimentSpec: trials must be >= 1");
  if (n_iterations < 1) {
    throw ConfigError("ExperimentSpec: n_iterations must be >= 1");
  }
  if (l_grid.size() != m_grid.size()) {
    if (l_grid.size() == 1) {
      l_grid.assign(m_grid.size(), l_grid[0]);
    } else if (l_grid.empty()) {
      l_grid = m_grid;
    } else {
      throw ConfigError("ExperimentSpec: l_grid must pair with m_grid");
    }
  }
}

ExperimentSpec make_default_spec(ExperimentKind kind, bool full) {
  ExperimentSpec spec;
  spec.kind = kind;
  spec.full = full;
  switch (kind) {
    case ExperimentKind::kPhaseTransition:
      spec.m_grid = {30};
      spec.l_grid = {30};
      spec.theta_grid = full ? std::vector<double>{0.1, 0.2, 0.3, 0.4}
                             : std::vector<double>{0.2};
      spec.trials = 100;
      // n grid defaults are derived per (m, theta) from the bound n_star.
      break;
    case ExperimentKind::kLearnCurve:
      if (full) {
        spec.m_grid = {64};
        spec.l_grid = {64};
        spec.n_grid = {400};
        spec.theta_grid = {5.0 / 64.0};
        spec.trials = 100;
        spec.n_iterations = 150;
      } else {
        spec.m_grid = {32};
        spec.l_grid = {32};
        spec.n_grid = {300};
        spec.theta_grid = {5.0 / 32.0};
        spec.trials = 50;
        spec.n_iterations = 50;
      }
      spec.methods = {UpdateKind::kMod, UpdateKind::kKsvd,
                      UpdateKind::kBlotlessIterTls};
      break;
    case ExperimentKind::kPatternRobustness:
      spec.m_grid = {full ? 64 : 32};
      spec.l_grid = spec.m_grid;
      spec.n_grid = {full ? 500 : 256};
      spec.theta_grid = {full ? 5.0 / 64.0 : 5.0 / 32.0};
      spec.r_grid = {0.0, 0.05, 0.1, 0.2};
      spec.trials = full ? 100 : 50;
      spec.methods = {UpdateKind::kBlotlessIterTls, UpdateKind::kMod,
                      UpdateKind::kKsvd};
      break;
    case ExperimentKind::kBlockSizeSweep:
      spec.m_grid = {full ? 64 : 32};
      spec.l_grid = spec.m_grid;
      spec.n_grid = {full ? 200 : 128};
      spec.theta_grid = {full ? 5.0 / 64.0 : 5.0 / 32.0};
      spec.block_sizes = full ? std::vector<int>{1, 4, 16, 64}
                              : std::vector<int>{1, 4, 16, 32};
      spec.trials = full ? 50 : 20;
      spec.n_iterations = 50;
      spec.methods = {UpdateKind::kBlotlessIterTls};
      break;
    case ExperimentKind::kRuntimeBench:
      spec.m_grid = {16};
      spec.l_grid = {16};
      spec.n_grid = {50, 100};
      spec.theta_grid = {0.3};
      spec.methods = {UpdateKind::kBlotlessIterTls, UpdateKind::kBlotlessParTls,
                      UpdateKind::kBlotlessStls};
      spec.trials = 3;
      spec.n_iterations = 2;
      spec.stls_max_iters = 3;
      break;
    case ExperimentKind::kBoundsTable:
      spec.m_grid = {15, 20, 25, 30};
      spec.theta_grid = {0.1, 0.2, 0.3, 0.4};
      spec.l_grid = spec.m_grid;
      break;
    case ExperimentKind::kDenoise:
      spec.sigma_grid = {10.0, 20.0, 30.0};
      spec.methods = {UpdateKind::kBlotlessIterTls, UpdateKind::kMod,
                      UpdateKind::kKsvd};
      spec.n_iterations = full ? 20 : 15;
      spec.m_grid = {64};
      spec.l_grid = {128};
      break;
  }
  return spec;
}

std::string ExperimentSpec::to_json() const {
  nlohmann::json j;
  j["kind"] = to_string(kind);
  j["m_grid"] = m_grid;
  j["l_grid"] = l_grid;
  j["n_grid"] = n_grid;
  j["theta_grid"] = theta_grid;
  j["r_grid"] = r_grid;
  j["sigma_grid"] = sigma_grid;
  std::vector<std::string> method_names;
  for (UpdateKind k : methods) method_names.push_back(to_string(k));
  j["methods"] = method_names;
  j["block_sizes"] = block_sizes;
  if (snr_db) j["snr_db"] = *snr_db;
  j["epsilon"] = epsilon;
  j["trials"] = trials;
  j["n_iterations"] = n_iterations;
  j["omp_k"] = omp_k;
  j["stls_max_iters"] = stls_max_iters;
  j["base_seed"] = base_seed;
  j["threads"] = threads;
  j["full"] = full;
  j["image_dir"] = image_dir;
  j["train_patches"] = train_patches;
  j["patch"] = patch;
  j["dict_atoms"] = dict_atoms;
  j["train_theta"] = train_theta;
  return j.dump(2);
}

ExperimentSpec ExperimentSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("spec JSON: ") + e.what());
  }
  ExperimentSpec spec;
  try {
    spec.kind = kind_from_string(j.at("kind").get<std::string>());
    auto get = [&j](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("m_grid", spec.m_grid);
    get("l_grid", spec.l_grid);
    get("n_grid", spec.n_grid);
    get("theta_grid", spec.theta_grid);
    get("r_grid", spec.r_grid);
    get("sigma_grid", spec.sigma_grid);
    get("block_sizes", spec.block_sizes);
    get("epsilon", spec.epsilon);
    get("trials", spec.trials);
    get("n_iterations", spec.n_iterations);
    get("omp_k", spec.omp_k);
    get("stls_max_iters", spec.stls_max_iters);
    get("base_seed", spec.base_seed);
    get("threads", spec.threads);
    get("full", spec.full);
    get("image_dir", spec.image_dir);
    get("train_patches", spec.train_patches);
    get("patch", spec.patch);
    get("dict_atoms", spec.dict_atoms);
    get("train_theta", spec.train_theta);
    if (j.contains("snr_db") && !j.at("snr_db").is_null()) {
      spec.snr_db = j.at("snr_db").get<double>();
    }
    if (j.contains("methods")) {
      spec.methods.clear();
      for (const auto& name : j.at("methods")) {
        spec.methods.push_back(
            update_kind_from_string(name.get<std::string>()));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("spec JSON: ") + e.what());
  }
  return spec;
}

void ExperimentResult::sort_rows() {
  std::sort(rows.begin(), rows.end(),
            [](const ResultRow& a, const ResultRow& b) {
              if (a.grid != b.grid) return a.grid < b.grid;
              if (a.trial != b.trial) return a.trial < b.trial;
              if (a.iteration != b.iteration) return a.iteration < b.iteration;
              return a.metric < b.metric;
            });
}

void ExperimentResult::write_csv(std::ostream& out) const {
  out << "grid,trial,iteration,metric,value,seconds\n";
  for (const auto& row : rows) {
    out << row.grid << ',' << row.trial << ',' << row.iteration << ','
        << row.metric << ',' << format_full(row.value) << ','
        << format_full(row.seconds) << '\n';
  }
}

void ExperimentResult::write_csv_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_csv(out);
  if (!out) throw IoError("write failed: " + path);
}

ExperimentResult run_phase_transition(const ExperimentSpec& raw) {
  ExperimentSpec spec = raw;
  spec.finalize();
  ExperimentResult result;

  std::uint64_t grid_index = 0;
  for (std::size_t mi = 0; mi < spec.m_grid.size(); ++mi) {
    const int m = spec.m_grid[mi];
    for (double theta : spec.theta_grid) {
      const BoundReport bounds = compute_bounds(m, theta, spec.epsilon);
      std::vector<int> n_grid = spec.n_grid;
      if (n_grid.empty()) {
        for (double f : {0.62, 0.74, 0.86, 0.98, 1.11, 1.23}) {
          n_grid.push_back(static_cast<int>(std::lround(f * bounds.n_star)));
        }
      }
      const std::string point_label =
          GridLabel().add("m", m).add("theta", theta).str();
      result.rows.push_back(
          {point_label, -1, -1, "n_star", bounds.n_star, 0.0});

      double n_sim = std::numeric_limits<double>::quiet_NaN();
      for (int n : n_grid) {
        const std::string label =
            GridLabel().add("m", m).add("theta", theta).add("n", n).str();
        std::vector<double> success(spec.trials, 0.0);
        const std::uint64_t point_id = grid_index++;
        parallel_for(spec.trials, spec.threads, [&](std::size_t t) {
          GenConfig cfg;
          cfg.m = m;
          cfg.l = m;
          cfg.n = n;
          cfg.theta = theta;
          cfg.seed = trial_seed(spec.base_seed, point_id, t);
          TrainingSet set = gen_training_set(cfg);
          bool ok = false;
          try {
            RowSolveResult solved =
                blotless_ls(set.samples, set.true_coeffs->pattern);
            Dictionary recovered(pseudo_inverse(solved.h.h));
            ok = is_exact_recovery(recovered, *set.true_dictionary);
          } catch (const Error&) {
            ok = false;  // ambiguous or degenerate trials count as failures
          }
          success[t] = ok ? 1.0 : 0.0;
        });
        for (int t = 0; t < spec.trials; ++t) {
          result.rows.push_back({label, t, -1, "success", success[t], 0.0});
        }
        const double rate = mean(success);
        result.rows.push_back({label, -1, -1, "success_rate", rate, 0.0});
        if (std::isnan(n_sim) && rate >= 0.99) {
          n_sim = static_cast<double>(n);
        }
      }
      result.rows.push_back({point_label, -1, -1, "n_sim", n_sim, 0.0});
    }
  }
  result.sort_rows();
  return result;
}

namespace {

// Shared by the learn-curve and block-sweep runners.
void run_learning_series(const ExperimentSpec& spec, ExperimentResult& result,
                         UpdateKind kind, int m, int l, int n, double theta,
                         int block_size, const std::string& label,
                         std::uint64_t grid_id) {
  struct TrialOutput {
    std::vector<IterationRecord> history;
    double final_r_err = std::numeric_limits<double>::quiet_NaN();
  };
  std::vector<TrialOutput> outputs(spec.trials);

  parallel_for(spec.trials, spec.threads, [&](std::size_t t) {
    GenConfig gen;
    gen.m = m;
    gen.l = l;
    gen.n = n;
    gen.theta = theta;
    gen.seed = trial_seed(spec.base_seed, grid_id, t);
    gen.snr_db = spec.snr_db;
    TrainingSet set = gen_training_set(gen);
    LearnConfig cfg = make_learn_config(spec, kind, theta, l,
                                        mix_seed(gen.seed, 0xD1C7), block_size);
    LearnResult learned =
        learn(set.samples, cfg, &set.true_dictionary.value());
    outputs[t].history = std::move(learned.history);
    if (!outputs[t].history.empty() && outputs[t].history.back().r_err) {
      outputs[t].final_r_err = *outputs[t].history.back().r_err;
    }
  });

  std::vector<double> finals;
  std::vector<double> iter_sum(spec.n_iterations, 0.0);
  for (int t = 0; t < spec.trials; ++t) {
    for (const auto& rec : outputs[t].history) {
      result.rows.push_back(
          {label, t, rec.iteration, "r_err", rec.r_err.value_or(NAN),
           rec.seconds});
      result.rows.push_back(
          {label, t, rec.iteration, "objective", rec.objective, rec.seconds});
      iter_sum[rec.iteration] += rec.r_err.value_or(NAN);
    }
    finals.push_back(outputs[t].final_r_err);
  }
  for (int it = 0; it < spec.n_iterations; ++it) {
    result.rows.push_back(
        {label, -1, it, "mean_r_err", iter_sum[it] / spec.trials, 0.0});
  }
  result.rows.push_back({label, -1, -1, "median_final_r_err", median(finals),
                         0.0});
}

}  // namespace

ExperimentResult run_learn_curve(const ExperimentSpec& raw) {
  ExperimentSpec spec = raw;
  spec.finalize();
  for (UpdateKind kind : spec.methods) {
    if (kind == UpdateKind::kBlotlessLs) {
      throw ConfigError("run_learn_curve: BLOTLESS_LS is not a learning "
                        "method here; use ITERTLS/PARTLS/STLS");
    }
  }
  ExperimentResult result;
  std::uint64_t grid_id = 0;
  for (std::size_t mi = 0; mi < spec.m_grid.size(); ++mi) {
    const int m = spec.m_grid[mi];
    const int l = spec.l_grid[mi];
    for (double theta : spec.theta_grid) {
      for (int n : spec.n_grid) {
        for (UpdateKind kind : spec.methods) {
          if (kind == UpdateKind::kBlotlessStls &&
              static_cast<long>(m) * n > UpdateMethod{}.stls_size_cap) {
            throw ConfigError("run_learn_curve: STLS size cap exceeded");
          }
          GridLabel label;
          label.add("m", m).add("l", l).add("n", n).add("theta", theta);
          if (spec.snr_db) label.add("snr_db", *spec.snr_db);
          label.add("method", to_string(kind));
          run_learning_series(spec, result, kind, m, l, n, theta, 0,
                              label.str(), grid_id++);
        }
      }
    }
  }
  result.sort_rows();
  return result;
}

ExperimentResult run_pattern_robustness(const ExperimentSpec& raw) {
  ExperimentSpec spec = raw;
  spec.finalize();
  ExperimentResult result;

  std::uint64_t grid_id = 0;
  for (std::size_t mi = 0; mi < spec.m_grid.size(); ++mi) {
    const int m = spec.m_grid[mi];
    const int l = spec.l_grid[mi];
    for (double theta : spec.theta_grid) {
      for (int n : spec.n_grid) {
        for (double r : spec.r_grid) {
          const std::uint64_t point_id = grid_id++;
          struct TrialErr {
            double itertls = NAN, mod = NAN, ksvd = NAN;
          };
          std::vector<TrialErr> errs(spec.trials);

          parallel_for(spec.trials, spec.threads, [&](std::size_t t) {
            GenConfig gen;
            gen.m = m;
            gen.l = l;
            gen.n = n;
            gen.theta = theta;
            gen.seed = trial_seed(spec.base_seed, point_id, t);
            TrainingSet set = gen_training_set(gen);
            const Matrix& y = set.samples;
            const Dictionary& d0 = *set.true_dictionary;
            SupportPattern corrupted = corrupt_pattern(
                set.true_coeffs->pattern, r, mix_seed(gen.seed, 0xC0));

            // Shared initial estimate: the exact-case least-squares solve on
            // the corrupted pattern. Each update method consumes it in its
            // own way, so differences reflect the update step alone.
            RowSolveResult boot = blotless_ls_lenient(y, corrupted);

            for (UpdateKind kind : spec.methods) {
              double err = NAN;
              try {
                switch (kind) {
                  case UpdateKind::kBlotlessIterTls: {
                    UpdateMethod method;
                    method.kind = kind;
                    TlsResult tls = itertls_update(y, boot.x, method);
                    Matrix atoms =
                        least_squares(tls.x.values.transpose(),
                                      tls.denoised_y.transpose())
                            .transpose();
                    err = recovery_error(Dictionary(atoms), d0).r_err;
                    break;
                  }
                  case UpdateKind::kMod: {
                    Matrix atoms = mod_update(y, boot.x);
                    err = recovery_error(Dictionary(atoms), d0).r_err;
                    break;
                  }
                  case UpdateKind::kKsvd: {
                    NormalizeResult norm =
                        normalize(Dictionary(pseudo_inverse(boot.h.h)));
                    Dictionary d = norm.dict;
                    SparseCoeffs x(apply_scaling(boot.x.values, norm.scaling),
                                   corrupted);
                    ksvd_update(y, d, x);
                    err = recovery_error(d, d0).r_err;
                    break;
                  }
                  default:
                    break;
                }
              } catch (const Error&) {
                err = 1.0;  // failed trials score the worst possible error
              }
              if (kind == UpdateKind::kBlotlessIterTls) errs[t].itertls = err;
              if (kind == UpdateKind::kMod) errs[t].mod = err;
              if (kind == UpdateKind::kKsvd) errs[t].ksvd = err;
            }
          });

          for (UpdateKind kind : spec.methods) {
            const std::string label = GridLabel()
                                          .add("m", m)
                                          .add("l", l)
                                          .add("n", n)
                                          .add("theta", theta)
                                          .add("r", r)
                                          .add("method", to_string(kind))
                                          .str();
            std::vector<double> vals;
            for (int t = 0; t < spec.trials; ++t) {
              double v = NAN;
              if (kind == UpdateKind::kBlotlessIterTls) v = errs[t].itertls;
              if (kind == UpdateKind::kMod) v = errs[t].mod;
              if (kind == UpdateKind::kKsvd) v = errs[t].ksvd;
              result.rows.push_back({label, t, -1, "r_err", v, 0.0});
              vals.push_back(v);
            }
            result.rows.push_back(
                {label, -1, -1, "median_r_err", median(vals), 0.0});
          }
        }
      }
    }
  }
  result.sort_rows();
  return result;
}

ExperimentResult run_block_size_sweep(const ExperimentSpec& raw) {
  ExperimentSpec spec = raw;
  spec.finalize();
  ExperimentResult result;
  std::uint64_t grid_id = 0;
  for (std::size_t mi = 0; mi < spec.m_grid.size(); ++mi) {
    const int m = spec.m_grid[mi];
    const int l = spec.l_grid[mi];
    for (double theta : spec.theta_grid) {
      for (int n : spec.n_grid) {
        for (int block : spec.block_sizes) {
          if (block > m) {
            throw ConfigError("run_block_size_sweep: block size " +
                              std::to_string(block) + " > m");
          }
          const std::string label = GridLabel()
                                        .add("m", m)
                                        .add("l", l)
                                        .add("n", n)
                                        .add("theta", theta)
                                        .add("block", block)
                                        .add("method", "BLOTLESS_ITERTLS")
                                        .str();
          run_learning_series(spec, result, UpdateKind::kBlotlessIterTls, m, l,
                              n, theta, block, label, grid_id++);
        }
        // K-SVD reference series (single-atom updates to compare against).
        const std::string label = GridLabel()
                                      .add("m", m)
                                      .add("l", l)
                                      .add("n", n)
                                      .add("theta", theta)
                                      .add("method", "KSVD")
                                      .str();
        run_learning_series(spec, result, UpdateKind::kKsvd, m, l, n, theta, 0,
                            label, grid_id++);
      }
    }
  }
  result.sort_rows();
  return result;
}

ExperimentResult run_runtime_bench(const ExperimentSpec& raw) {
  ExperimentSpec spec = raw;
  spec.finalize();
  ExperimentResult result;
  std::uint64_t grid_id = 0;
  for (std::size_t mi = 0; mi < spec.m_grid.size(); ++mi) {
    const int m = spec.m_grid[mi];
    const int l = spec.l_grid[mi];
    for (double theta : spec.theta_grid) {
      for (int n : spec.n_grid) {
        for (UpdateKind kind : spec.methods) {
          const std::string label = GridLabel()
                                        .add("m", m)
                                        .add("l", l)
                                        .add("n", n)
                                        .add("theta", theta)
                                        .add("method", to_string(kind))
                                        .str();
          const std::uint64_t point_id = grid_id++;
          std::vector<double> per_iteration;
          // Timings are measured sequentially regardless of spec.threads.
          for (int t = 0; t < spec.trials; ++t) {
            GenConfig gen;
            gen.m = m;
            gen.l = l;
            gen.n = n;
            gen.theta = theta;
            gen.seed = trial_seed(spec.base_seed, point_id, t);
            TrainingSet set = gen_training_set(gen);
            LearnConfig cfg = make_learn_config(spec, kind, theta, l,
                                                mix_seed(gen.seed, 0xD1C7));
            LearnResult learned = learn(set.samples, cfg);
            for (const auto& rec : learned.history) {
              result.rows.push_back(
                  {label, t, rec.iteration, "seconds", rec.seconds,
                   rec.seconds});
              per_iteration.push_back(rec.seconds);
            }
          }
          result.rows.push_back({label, -1, -1, "mean_seconds_per_iteration",
                                 mean(per_iteration), 0.0});
        }
      }
    }
  }
  result.sort_rows();
  return result;
}

ExperimentResult run_bounds_table(const ExperimentSpec& raw) {
  ExperimentSpec spec = raw;
  spec.finalize();
  ExperimentResult result;
  for (int m : spec.m_grid) {
    for (double theta : spec.theta_grid) {
      const BoundReport report = compute_bounds(m, theta, spec.epsilon);
      const std::string label = GridLabel()
                                    .add("m", m)
                                    .add("theta", theta)
                                    .add("eps", spec.epsilon)
                                    .str();
      result.rows.push_back({label, -1, -1, "n1", report.n1, 0.0});
      result.rows.push_back({label, -1, -1, "n2", report.n2, 0.0});
      result.rows.push_back({label, -1, -1, "n3", report.n3, 0.0});
      result.rows.push_back({label, -1, -1, "n_star", report.n_star, 0.0});
      result.rows.push_back({label, -1, -1, "n_star_rounded",
                             static_cast<double>(report.n_star_rounded), 0.0});
    }
  }
  result.sort_rows();
  return result;
}

ExperimentResult run_denoise(const ExperimentSpec& raw) {
  ExperimentSpec spec = raw;
  spec.finalize();

  namespace fs = std::filesystem;
  std::vector<std::string> paths;
  if (!fs::is_directory(spec.image_dir)) {
    throw IoError("run_denoise: image directory not found: " + spec.image_dir);
  }
  for (const auto& entry : fs::directory_iterator(spec.image_dir)) {
    if (entry.path().extension() == ".pgm") {
      paths.push_back(entry.path().string());
    }
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) {
    throw IoError("run_denoise: no .pgm images in " + spec.image_dir);
  }
  std::vector<GrayImage> images;
  for (const auto& p : paths) images.push_back(read_pgm(p));

  const int patch = spec.patch;
  const int m = patch * patch;
  const int l = spec.dict_atoms;
  const double theta = spec.train_theta;

  // Clean training patches shared by every method.
  Matrix train = sample_training_patches(images, spec.train_patches, patch,
                                         mix_seed(spec.base_seed, 0x7A7C));

  ExperimentResult result;
  for (UpdateKind kind : spec.methods) {
    LearnConfig cfg = make_learn_config(spec, kind, theta, l,
                                        mix_seed(spec.base_seed, 0x7D1C));
    LearnResult learned = learn(train, cfg);
    const Dictionary& dict = learned.dict;

    for (std::size_t img_idx = 0; img_idx < images.size(); ++img_idx) {
      const std::string name = fs::path(paths[img_idx]).stem().string();
      for (double sigma : spec.sigma_grid) {
        const std::string label = GridLabel()
                                      .add("image", name)
                                      .add("sigma", sigma)
                                      .add("method", to_string(kind))
                                      .str();
        const Matrix noisy = add_gaussian_noise(
            images[img_idx].pixels, sigma,
            mix_seed(spec.base_seed, 1000 * img_idx + std::lround(sigma)));
        // Noisy PSNR is measured on the unclamped pixels so the additive
        // noise level is reflected exactly.
        result.rows.push_back({label, -1, -1, "psnr_noisy",
                               psnr(images[img_idx].pixels, noisy), 0.0});
        PatchConfig pcfg;
        pcfg.patch = patch;
        pcfg.sigma = sigma;
        GrayImage restored = denoise(GrayImage(noisy), dict, pcfg);
        result.rows.push_back({label, -1, -1, "psnr_denoised",
                               psnr(images[img_idx].pixels, restored.pixels),
                               0.0});
      }
    }
  }
  result.sort_rows();
  return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::kPhaseTransition: return run_phase_transition(spec);
    case ExperimentKind::kLearnCurve: return run_learn_curve(spec);
    case ExperimentKind::kPatternRobustness:
      return run_pattern_robustness(spec);
    case ExperimentKind::kBlockSizeSweep: return run_block_size_sweep(spec);
    case ExperimentKind::kRuntimeBench: return run_runtime_bench(spec);
    case ExperimentKind::kBoundsTable: return run_bounds_table(spec);
    case ExperimentKind::kDenoise: return run_denoise(spec);
  }
  throw ConfigError("run_experiment: unknown kind");
}

}  // namespace blotless
