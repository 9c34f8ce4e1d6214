#include <doctest.h>

#include <cmath>

#include "blotless/errors.hpp"
#include "blotless/synth.hpp"

using namespace blotless;

namespace {

GenConfig base_config() {
  GenConfig cfg;
  cfg.m = 64;
  cfg.l = 64;
  cfg.n = 500;
  cfg.theta = 0.2;
  cfg.seed = 123;
  return cfg;
}

}  // namespace

TEST_CASE("gen_dictionary moments match N(0, 1/m)") {
  GenConfig cfg = base_config();
  double sum = 0.0, sum2 = 0.0;
  long count = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    cfg.seed = s;
    Dictionary d = gen_dictionary(cfg);
    sum += d.atoms.sum();
    sum2 += d.atoms.squaredNorm();
    count += d.atoms.size();
  }
  const double mean = sum / count;
  const double var = sum2 / count - mean * mean;
  const double sigma2 = 1.0 / cfg.m;
  // 3-sigma band for the sample mean of count draws of variance 1/m.
  CHECK(std::abs(mean) < 3.0 * std::sqrt(sigma2 / count));
  CHECK(var == doctest::Approx(sigma2).epsilon(0.1));
}

TEST_CASE("gen_dictionary and gen_coeffs are deterministic per seed") {
  const GenConfig cfg = base_config();
  CHECK(gen_dictionary(cfg).atoms == gen_dictionary(cfg).atoms);
  SparseCoeffs a = gen_coeffs(cfg);
  SparseCoeffs b = gen_coeffs(cfg);
  CHECK(a.values == b.values);
  CHECK(a.pattern.rows == b.pattern.rows);
}

TEST_CASE("gen_coeffs nonzero fraction concentrates at theta") {
  GenConfig cfg = base_config();
  cfg.n = 500;
  SparseCoeffs x = gen_coeffs(cfg);
  const double total = static_cast<double>(cfg.l) * cfg.n;
  const double fraction = static_cast<double>(x.pattern.size()) / total;
  const double band = 3.0 * std::sqrt(cfg.theta * (1 - cfg.theta) / total);
  CHECK(std::abs(fraction - cfg.theta) < band);
}

TEST_CASE("gen_coeffs nonzero values have unit variance") {
  GenConfig cfg = base_config();
  SparseCoeffs x = gen_coeffs(cfg);
  double sum2 = 0.0;
  long count = 0;
  for (int i = 0; i < cfg.l; ++i) {
    for (int j : x.pattern.rows[i]) {
      sum2 += x.values(i, j) * x.values(i, j);
      ++count;
    }
  }
  CHECK(sum2 / count == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("gen_training_set: exact product without noise") {
  GenConfig cfg = base_config();
  TrainingSet set = gen_training_set(cfg);
  CHECK(set.samples ==
        set.true_dictionary->atoms * set.true_coeffs->values);
}

TEST_CASE("gen_training_set: SNR scaling is exact") {
  GenConfig cfg = base_config();
  cfg.snr_db = 15.0;
  TrainingSet set = gen_training_set(cfg);
  const Matrix clean = set.true_dictionary->atoms * set.true_coeffs->values;
  const Matrix noise = set.samples - clean;
  const double snr =
      10.0 * std::log10(clean.squaredNorm() / noise.squaredNorm());
  CHECK(std::abs(snr - 15.0) < 1e-9);
}

TEST_CASE("gen_training_set: infinite snr behaves as absent") {
  GenConfig cfg = base_config();
  cfg.snr_db = std::numeric_limits<double>::infinity();
  TrainingSet set = gen_training_set(cfg);
  CHECK(set.samples ==
        set.true_dictionary->atoms * set.true_coeffs->values);
  CHECK(!set.snr_db.has_value());
}

TEST_CASE("corrupt_pattern preserves size and moves the exact count") {
  GenConfig cfg = base_config();
  cfg.l = 16;
  cfg.n = 60;
  SparseCoeffs x = gen_coeffs(cfg);
  const SupportPattern& p = x.pattern;

  SupportPattern same = corrupt_pattern(p, 0.0, 31);
  CHECK(same.rows == p.rows);

  const double r = 0.1;
  SupportPattern moved = corrupt_pattern(p, r, 31);
  CHECK(moved.size() == p.size());
  const long expected_moves =
      static_cast<long>(std::floor(r * static_cast<double>(p.size())));
  long hamming = 0;
  for (int i = 0; i < p.l; ++i) {
    for (int j = 0; j < p.n; ++j) {
      if (p.contains(i, j) != moved.contains(i, j)) ++hamming;
    }
  }
  CHECK(hamming == 2 * expected_moves);
}

TEST_CASE("corrupt_pattern full swap keeps the size") {
  GenConfig cfg = base_config();
  cfg.l = 8;
  cfg.n = 40;
  cfg.theta = 0.2;
  SparseCoeffs x = gen_coeffs(cfg);
  SupportPattern swapped = corrupt_pattern(x.pattern, 1.0, 5);
  CHECK(swapped.size() == x.pattern.size());
  long overlap = 0;
  for (int i = 0; i < x.pattern.l; ++i) {
    for (int j : x.pattern.rows[i]) {
      if (swapped.contains(i, j)) ++overlap;
    }
  }
  CHECK(overlap == 0);  // moved entries come from the complement
}

TEST_CASE("corrupt_pattern rejects impossible moves") {
  SupportPattern dense(2, 2);
  dense.rows = {{0, 1}, {0, 1}};  // complement is empty
  CHECK_THROWS_AS(corrupt_pattern(dense, 0.5, 1), ConfigError);
}

TEST_CASE("degenerate all-zero signal with an SNR request errors") {
  GenConfig cfg = base_config();
  cfg.m = 4;
  cfg.l = 4;
  cfg.n = 3;
  cfg.snr_db = 10.0;
  // Find a seed whose Bernoulli draws produce an empty pattern.
  bool tested = false;
  for (std::uint64_t s = 0; s < 50000 && !tested; ++s) {
    cfg.seed = s;
    cfg.theta = 0.01;
    if (gen_coeffs(cfg).pattern.size() == 0) {
      CHECK_THROWS_AS(gen_training_set(cfg), DegenerateDataError);
      tested = true;
    }
  }
  CHECK(tested);
}

TEST_CASE("trial seeds differ across grid points and trials") {
  CHECK(trial_seed(1, 0, 0) != trial_seed(1, 0, 1));
  CHECK(trial_seed(1, 0, 0) != trial_seed(1, 1, 0));
  CHECK(trial_seed(1, 2, 3) == trial_seed(1, 2, 3));
}
