#ifndef BLOTLESS_IMAGING_HPP
#define BLOTLESS_IMAGING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "blotless/model.hpp"

namespace blotless {

// Grayscale image with real-valued pixels. Loading clamps to [0, 255];
// intermediate pipeline stages stay unclamped until final write-back.
struct GrayImage {
  Matrix pixels;  // height x width

  GrayImage() = default;
  explicit GrayImage(Matrix p) : pixels(std::move(p)) {}

  int height() const { return static_cast<int>(pixels.rows()); }
  int width() const { return static_cast<int>(pixels.cols()); }
};

struct PatchConfig {
  int patch = 8;
  int stride = 1;
  double sigma = 0.0;            // noise std the denoiser assumes
  double omp_error_gain = 1.15;  // residual threshold = gain * sigma * patch

  void check() const;
};

struct PatchSet {
  Matrix columns;  // patch^2 x count, mean-subtracted, column-major patches
  Vector means;    // per-patch mean, restored at reconstruction
  int image_height = 0;
  int image_width = 0;
};

// Patches are enumerated row-major by top-left corner with the given stride
// (every position with r + patch <= height, c + patch <= width) and each
// patch is vectorized column-major. The per-patch mean is subtracted and
// recorded.
PatchSet extract_patches(const GrayImage& img, const PatchConfig& cfg);

// Overlap-averaging inverse of extract_patches: every pixel is the mean of
// all patch contributions covering it (means restored first); the result is
// clamped to [0, 255].
GrayImage reconstruct_from_patches(const Matrix& patches, const Vector& means,
                                   int height, int width,
                                   const PatchConfig& cfg);

// Sparse-coding denoiser: every mean-subtracted patch is OMP-coded against
// the dictionary with residual threshold gain * sigma * patch and atom cap
// patch^2 / 2, then the approximations are reassembled by overlap averaging.
GrayImage denoise(const GrayImage& img, const Dictionary& d,
                  const PatchConfig& cfg);

// n patches drawn uniformly over all (image, position) pairs, i.e. images
// weighted by their patch counts; mean-subtracted and vectorized.
Matrix sample_training_patches(const std::vector<GrayImage>& images, int n,
                               int patch, std::uint64_t seed);

// Binary 8-bit PGM (P5, maxval 255).
GrayImage read_pgm(const std::string& path);
void write_pgm(const GrayImage& img, const std::string& path);

// Seeded i.i.d. Gaussian pixel noise, unclamped, for denoising experiments.
Matrix add_gaussian_noise(const Matrix& pixels, double sigma,
                          std::uint64_t seed);

}  // namespace blotless

#endif
