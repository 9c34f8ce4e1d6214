#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "blotless/errors.hpp"
#include "blotless/imaging.hpp"
#include "blotless/metrics.hpp"
#include "test_helpers.hpp"

using namespace blotless;
using blotless::testing::random_matrix;

namespace {

GrayImage random_image(int h, int w, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  Matrix p(h, w);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) p(i, j) = 255.0 * rng.uniform();
  }
  return GrayImage(std::move(p));
}

}  // namespace

TEST_CASE("patch counting") {
  PatchConfig cfg;
  cfg.patch = 8;
  cfg.stride = 1;
  CHECK(extract_patches(random_image(8, 8, 1), cfg).columns.cols() == 1);
  CHECK(extract_patches(random_image(9, 8, 2), cfg).columns.cols() == 2);
  CHECK(extract_patches(random_image(10, 10, 3), cfg).columns.cols() == 9);
  CHECK_THROWS_AS(extract_patches(random_image(4, 4, 4), cfg), ConfigError);
}

TEST_CASE("extract then reconstruct is the identity") {
  for (int stride : {1, 2, 4}) {
    GrayImage img = random_image(16, 12, 10 + stride);
    PatchConfig cfg;
    cfg.patch = 4;
    cfg.stride = stride;
    PatchSet set = extract_patches(img, cfg);
    GrayImage back = reconstruct_from_patches(set.columns, set.means, 16, 12,
                                              cfg);
    CHECK((back.pixels - img.pixels).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("overlapping conflicts average pixelwise") {
  // Two 1x2 patches over a 1x3 image; disagree on the middle pixel.
  PatchConfig cfg;
  cfg.patch = 1;
  cfg.stride = 1;
  Matrix patches(1, 3);
  patches << 0, 0, 0;
  Vector means(3);
  means << 10, 20, 30;
  GrayImage img = reconstruct_from_patches(patches, means, 1, 3, cfg);
  CHECK(img.pixels(0, 0) == doctest::Approx(10));
  CHECK(img.pixels(0, 1) == doctest::Approx(20));
  CHECK(img.pixels(0, 2) == doctest::Approx(30));

  cfg.patch = 2;
  Matrix p2 = Matrix::Zero(4, 2);
  Vector m2(2);
  m2 << 0, 100;  // patches claim 0 and 100 over the shared middle column
  GrayImage img2 = reconstruct_from_patches(p2, m2, 2, 3, cfg);
  CHECK(img2.pixels(0, 1) == doctest::Approx(50));
}

TEST_CASE("reconstruct validates the patch count") {
  PatchConfig cfg;
  cfg.patch = 4;
  CHECK_THROWS_AS(
      reconstruct_from_patches(Matrix::Zero(16, 3), Vector::Zero(3), 8, 8,
                               cfg),
      DimensionError);
}

TEST_CASE("constant images are perfectly denoised by mean subtraction") {
  GrayImage img(Matrix::Constant(16, 16, 77.0));
  Dictionary d(Matrix::Identity(16, 16));  // patch 4x4 atoms
  PatchConfig cfg;
  cfg.patch = 4;
  cfg.sigma = 0.0;
  GrayImage out = denoise(img, d, cfg);
  CHECK((out.pixels - img.pixels).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("zero-sigma denoising of representable images keeps PSNR high") {
  // Image whose mean-subtracted patches the canonical basis represents
  // exactly; denoising must not damage it.
  GrayImage img = random_image(12, 12, 21);
  Dictionary d(Matrix::Identity(16, 16));
  PatchConfig cfg;
  cfg.patch = 4;
  cfg.sigma = 0.0;
  GrayImage out = denoise(img, d, cfg);
  CHECK(psnr(img.pixels, out.pixels) > 100.0);  // near-lossless
  for (int i = 0; i < out.pixels.rows(); ++i) {
    for (int j = 0; j < out.pixels.cols(); ++j) {
      CHECK(out.pixels(i, j) >= 0.0);
      CHECK(out.pixels(i, j) <= 255.0);
    }
  }
}

TEST_CASE("sample_training_patches shapes and determinism") {
  std::vector<GrayImage> images = {random_image(24, 24, 31),
                                   random_image(16, 40, 32)};
  const Matrix a = sample_training_patches(images, 500, 8, 7);
  CHECK(a.rows() == 64);
  CHECK(a.cols() == 500);
  const Matrix b = sample_training_patches(images, 500, 8, 7);
  CHECK(a == b);
  const Matrix single = sample_training_patches(images, 1, 8, 9);
  CHECK(single.cols() == 1);
  // Mean-subtracted columns.
  CHECK(std::abs(a.col(0).mean()) < 1e-12);
  CHECK_THROWS_AS(sample_training_patches({}, 5, 8, 1), ConfigError);
}

TEST_CASE("pgm round trip") {
  namespace fs = std::filesystem;
  GrayImage img = random_image(20, 14, 41);
  // Quantize first so the round trip is exact.
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 14; ++j) {
      img.pixels(i, j) = std::floor(img.pixels(i, j));
    }
  }
  const std::string path =
      (fs::temp_directory_path() / "blotless_test_roundtrip.pgm").string();
  write_pgm(img, path);
  GrayImage back = read_pgm(path);
  CHECK(back.pixels == img.pixels);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_pgm("/nonexistent/definitely_missing.pgm"), IoError);
}

TEST_CASE("gaussian image noise hits the requested level") {
  GrayImage img(Matrix::Constant(64, 64, 128.0));
  const Matrix noisy = add_gaussian_noise(img.pixels, 10.0, 3);
  const double measured =
      std::sqrt((noisy - img.pixels).squaredNorm() / (64.0 * 64.0));
  CHECK(measured == doctest::Approx(10.0).epsilon(0.05));
}
