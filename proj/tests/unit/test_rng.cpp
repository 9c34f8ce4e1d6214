#include <doctest.h>

#include <cmath>

#include "blotless/rng.hpp"

using namespace blotless;

TEST_CASE("xoshiro streams are reproducible and tag-separated") {
  Xoshiro256pp a(stream_seed(5, StreamTag::kDictionary));
  Xoshiro256pp b(stream_seed(5, StreamTag::kDictionary));
  Xoshiro256pp c(stream_seed(5, StreamTag::kCoeffs));
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t x = a.next();
    all_equal = all_equal && (x == b.next());
    any_diff = any_diff || (x != c.next());
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("uniform values live in [0, 1)") {
  Xoshiro256pp rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("gaussian moments") {
  Xoshiro256pp rng(2);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.gaussian();
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("gaussian consumes exactly two uniforms per draw") {
  Xoshiro256pp a(7), b(7);
  (void)a.gaussian();
  (void)b.uniform();
  (void)b.uniform();
  CHECK(a.next() == b.next());
}

TEST_CASE("uniform_below is in range and unbiased-ish") {
  Xoshiro256pp rng(3);
  int counts[5] = {0, 0, 0, 0, 0};
  for (int i = 0; i < 50000; ++i) {
    const std::uint64_t v = rng.uniform_below(5);
    REQUIRE(v < 5);
    ++counts[v];
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("mix_seed separates indices") {
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  CHECK(mix_seed(7, 3) == mix_seed(7, 3));
}
