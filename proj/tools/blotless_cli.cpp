// Command-line front end: sample-complexity bounds, synthetic data
// generation, dictionary learning and the experiment runners, all writing
// the repo's text/CSV/JSON formats.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "blotless/bounds.hpp"
#include "blotless/dict_update.hpp"
#include "blotless/errors.hpp"
#include "blotless/experiments.hpp"
#include "blotless/matrix.hpp"
#include "blotless/metrics.hpp"
#include "blotless/synth.hpp"

namespace {

using namespace blotless;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct ExperimentArgs {
  std::string spec_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
  bool full = false;
};

void add_experiment_flags(CLI::App* cmd, ExperimentArgs& args) {
  cmd->add_option("--spec", args.spec_path, "experiment spec JSON file");
  cmd->add_option("--out", args.out_path, "output CSV path (default stdout)");
  cmd->add_option("--seed", args.seed, "base seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
  cmd->add_option("--threads", args.threads, "worker threads for trials");
  cmd->add_flag("--full", args.full, "reference-scale settings (slow)");
}

int run_experiment_command(ExperimentKind kind, const ExperimentArgs& args) {
  ExperimentSpec spec = args.spec_path.empty()
                            ? make_default_spec(kind, args.full)
                            : ExperimentSpec::from_json(slurp(args.spec_path));
  if (spec.kind != kind) {
    throw ConfigError("spec kind does not match the subcommand");
  }
  if (args.full) spec.full = true;
  if (args.seed_set) spec.base_seed = args.seed;
  spec.threads = args.threads;
  ExperimentResult result = run_experiment(spec);
  if (args.out_path.empty()) {
    result.write_csv(std::cout);
  } else {
    result.write_csv_file(args.out_path);
    std::cout << "wrote " << result.rows.size() << " rows to " << args.out_path
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BLOTLESS dictionary learning toolkit"};
  app.require_subcommand(1);

  // bounds
  auto* bounds_cmd =
      app.add_subcommand("bounds", "sample-complexity bound report");
  int bounds_m = 30;
  double bounds_theta = 0.2, bounds_eps = 0.01;
  long bounds_omega = -1;
  std::string bounds_format = "table";
  bounds_cmd->add_option("--m", bounds_m, "signal dimension");
  bounds_cmd->add_option("--theta", bounds_theta, "sparsity ratio");
  bounds_cmd->add_option("--eps", bounds_eps, "failure probability");
  bounds_cmd->add_option("--omega", bounds_omega,
                         "realized support size for the counting bound n0");
  bounds_cmd->add_option("--format", bounds_format, "table or json");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic training set");
  GenConfig gen_cfg;
  gen_cfg.m = 32;
  gen_cfg.l = 32;
  gen_cfg.n = 300;
  gen_cfg.theta = 0.15625;
  double gen_snr = std::numeric_limits<double>::infinity();
  std::string gen_out = "training";
  gen_cmd->add_option("--m", gen_cfg.m, "signal dimension");
  gen_cmd->add_option("--l", gen_cfg.l, "atom count");
  gen_cmd->add_option("--n", gen_cfg.n, "sample count");
  gen_cmd->add_option("--theta", gen_cfg.theta, "sparsity ratio");
  gen_cmd->add_option("--seed", gen_cfg.seed, "seed");
  gen_cmd->add_option("--snr-db", gen_snr, "additive noise SNR in dB");
  gen_cmd->add_option("--out", gen_out,
                      "output prefix (<out>.txt, <out>.json, <out>.pattern.json)");

  // learn
  auto* learn_cmd =
      app.add_subcommand("learn", "alternating dictionary learning on a "
                                  "training matrix");
  std::string learn_y, learn_method = "BLOTLESS_ITERTLS", learn_out = "learned";
  int learn_iters = 50, learn_k = 5, learn_l = 0, learn_block = 0;
  std::uint64_t learn_seed = 1;
  learn_cmd->add_option("--y", learn_y, "training matrix (dense text format)")
      ->required();
  learn_cmd->add_option("--method", learn_method,
                        "MOD | KSVD | BLOTLESS_LS | BLOTLESS_PARTLS | "
                        "BLOTLESS_ITERTLS | BLOTLESS_STLS");
  learn_cmd->add_option("--iters", learn_iters, "outer iterations");
  learn_cmd->add_option("--k", learn_k, "OMP atoms per column");
  learn_cmd->add_option("--l", learn_l, "atom count (default m)");
  learn_cmd->add_option("--block", learn_block,
                        "BLOTLESS block size (default min(m, l))");
  learn_cmd->add_option("--seed", learn_seed, "seed");
  learn_cmd->add_option("--out", learn_out,
                        "output prefix (<out>.dict.txt, <out>.history.csv)");

  // update
  auto* update_cmd = app.add_subcommand(
      "update", "single dictionary-update call from a known pattern");
  std::string upd_y, upd_pattern, upd_method = "BLOTLESS_LS",
                                  upd_out = "update";
  update_cmd->add_option("--y", upd_y, "training matrix")->required();
  update_cmd->add_option("--pattern", upd_pattern, "support pattern JSON")
      ->required();
  update_cmd->add_option("--method", upd_method,
                         "BLOTLESS_LS | BLOTLESS_PARTLS | BLOTLESS_ITERTLS");
  update_cmd->add_option("--out", upd_out,
                         "output prefix (<out>.h.txt, <out>.x.txt)");

  // experiments
  ExperimentArgs phase_args, curve_args, robust_args, blocks_args, bench_args,
      boundstab_args, denoise_args;
  add_experiment_flags(
      app.add_subcommand("phase", "exact-recovery phase transition"),
      phase_args);
  add_experiment_flags(
      app.add_subcommand("curve", "learning-curve comparison"), curve_args);
  add_experiment_flags(
      app.add_subcommand("robust", "sparsity-pattern robustness"), robust_args);
  add_experiment_flags(
      app.add_subcommand("blocks", "block-size sweep"), blocks_args);
  add_experiment_flags(
      app.add_subcommand("bench", "runtime comparison of TLS variants"),
      bench_args);
  add_experiment_flags(
      app.add_subcommand("boundstable", "bound table over a grid"),
      boundstab_args);
  add_experiment_flags(
      app.add_subcommand("denoise", "patch-based image denoising"),
      denoise_args);

  try {
    app.parse(argc, argv);

    if (bounds_cmd->parsed()) {
      BoundReport report = compute_bounds(bounds_m, bounds_theta, bounds_eps);
      if (bounds_omega >= 0) report.n0 = compute_n0(bounds_m, bounds_omega);
      std::cout << (bounds_format == "json" ? report.to_json() + "\n"
                                            : report.to_table());
      return 0;
    }

    if (gen_cmd->parsed()) {
      if (std::isfinite(gen_snr)) gen_cfg.snr_db = gen_snr;
      TrainingSet set = gen_training_set(gen_cfg);
      write_matrix_file(gen_out + ".txt", set.samples);
      std::ofstream sidecar(gen_out + ".json");
      sidecar << "{\"m\":" << gen_cfg.m << ",\"l\":" << gen_cfg.l
              << ",\"n\":" << gen_cfg.n
              << ",\"theta\":" << format_full(gen_cfg.theta)
              << ",\"seed\":" << gen_cfg.seed;
      if (set.snr_db) sidecar << ",\"snr_db\":" << format_full(*set.snr_db);
      sidecar << "}\n";
      std::ofstream pat(gen_out + ".pattern.json");
      pat << set.true_coeffs->pattern.to_json() << "\n";
      std::cout << "wrote " << gen_out << ".txt (+ sidecars)\n";
      return 0;
    }

    if (learn_cmd->parsed()) {
      Matrix y = read_matrix_file(learn_y);
      LearnConfig cfg;
      cfg.method.kind = update_kind_from_string(learn_method);
      cfg.method.block_size = learn_block;
      cfg.omp.k = learn_k;
      cfg.n_iterations = learn_iters;
      cfg.seed = learn_seed;
      cfg.l = learn_l;
      LearnResult result = learn(y, cfg);
      write_matrix_file(learn_out + ".dict.txt", result.dict.atoms);
      std::ofstream hist(learn_out + ".history.csv");
      write_history_csv(hist, result.history);
      std::cout << "final objective "
                << format_full(result.history.back().objective) << ", wrote "
                << learn_out << ".dict.txt\n";
      return 0;
    }

    if (update_cmd->parsed()) {
      Matrix y = read_matrix_file(upd_y);
      SupportPattern pattern = SupportPattern::from_json(slurp(upd_pattern));
      InverseEstimate h;
      SparseCoeffs x;
      const UpdateKind kind = update_kind_from_string(upd_method);
      if (kind == UpdateKind::kBlotlessLs) {
        RowSolveResult r = blotless_ls(y, pattern);
        h = std::move(r.h);
        x = std::move(r.x);
      } else if (kind == UpdateKind::kBlotlessParTls) {
        RowSolveResult r = partls_update(y, pattern);
        h = std::move(r.h);
        x = std::move(r.x);
      } else if (kind == UpdateKind::kBlotlessIterTls) {
        SparseCoeffs init(Matrix::Zero(pattern.l, pattern.n), pattern);
        TlsResult r = itertls_update(y, init, UpdateMethod{});
        h = std::move(r.h);
        x = std::move(r.x);
      } else {
        throw ConfigError("update: unsupported method " + upd_method);
      }
      write_matrix_file(upd_out + ".h.txt", h.h);
      write_matrix_file(upd_out + ".x.txt", x.values);
      std::cout << "wrote " << upd_out << ".h.txt and " << upd_out
                << ".x.txt\n";
      return 0;
    }

    if (app.get_subcommand("phase")->parsed()) {
      return run_experiment_command(ExperimentKind::kPhaseTransition,
                                    phase_args);
    }
    if (app.get_subcommand("curve")->parsed()) {
      return run_experiment_command(ExperimentKind::kLearnCurve, curve_args);
    }
    if (app.get_subcommand("robust")->parsed()) {
      return run_experiment_command(ExperimentKind::kPatternRobustness,
                                    robust_args);
    }
    if (app.get_subcommand("blocks")->parsed()) {
      return run_experiment_command(ExperimentKind::kBlockSizeSweep,
                                    blocks_args);
    }
    if (app.get_subcommand("bench")->parsed()) {
      return run_experiment_command(ExperimentKind::kRuntimeBench, bench_args);
    }
    if (app.get_subcommand("boundstable")->parsed()) {
      return run_experiment_command(ExperimentKind::kBoundsTable,
                                    boundstab_args);
    }
    if (app.get_subcommand("denoise")->parsed()) {
      return run_experiment_command(ExperimentKind::kDenoise, denoise_args);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
