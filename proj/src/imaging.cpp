#include "blotless/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "blotless/errors.hpp"
#include "blotless/rng.hpp"
#include "blotless/sparse_coding.hpp"

namespace blotless {

void PatchConfig::check() const {
  if (patch < 1) throw ConfigError("PatchConfig: patch must be >= 1");
  if (stride < 1) throw ConfigError("PatchConfig: stride must be >= 1");
  if (sigma < 0.0) throw ConfigError("PatchConfig: sigma must be >= 0");
  if (omp_error_gain <= 0.0) {
    throw ConfigError("PatchConfig: omp_error_gain must be > 0");
  }
}

namespace {

struct PatchGrid {
  std::vector<int> row_starts;
  std::vector<int> col_starts;
  std::size_t count() const { return row_starts.size() * col_starts.size(); }
};

PatchGrid patch_grid(int height, int width, const PatchConfig& cfg) {
  cfg.check();
  if (cfg.patch > height || cfg.patch > width) {
    throw ConfigError("patch size exceeds image dimensions");
  }
  PatchGrid grid;
  for (int r = 0; r + cfg.patch <= height; r += cfg.stride) {
    grid.row_starts.push_back(r);
  }
  for (int c = 0; c + cfg.patch <= width; c += cfg.stride) {
    grid.col_starts.push_back(c);
  }
  return grid;
}

Vector vectorize_patch(const Matrix& pixels, int r, int c, int patch) {
  Vector v(patch * patch);
  int idx = 0;
  for (int pc = 0; pc < patch; ++pc) {
    for (int pr = 0; pr < patch; ++pr) {
      v(idx++) = pixels(r + pr, c + pc);
    }
  }
  return v;
}

}  // namespace

PatchSet extract_patches(const GrayImage& img, const PatchConfig& cfg) {
  const PatchGrid grid = patch_grid(img.height(), img.width(), cfg);
  PatchSet set;
  set.image_height = img.height();
  set.image_width = img.width();
  set.columns = Matrix(cfg.patch * cfg.patch, grid.count());
  set.means = Vector(grid.count());
  int col = 0;
  for (int r : grid.row_starts) {
    for (int c : grid.col_starts) {
      Vector v = vectorize_patch(img.pixels, r, c, cfg.patch);
      const double mean = v.mean();
      set.means(col) = mean;
      set.columns.col(col) = v.array() - mean;
      ++col;
    }
  }
  return set;
}

GrayImage reconstruct_from_patches(const Matrix& patches, const Vector& means,
                                   int height, int width,
                                   const PatchConfig& cfg) {
  const PatchGrid grid = patch_grid(height, width, cfg);
  if (patches.cols() != static_cast<long>(grid.count()) ||
      means.size() != patches.cols() ||
      patches.rows() != static_cast<long>(cfg.patch) * cfg.patch) {
    throw DimensionError("reconstruct_from_patches: patch set does not match "
                         "the enumeration for these dimensions");
  }
  Matrix sum = Matrix::Zero(height, width);
  Matrix weight = Matrix::Zero(height, width);
  int col = 0;
  for (int r : grid.row_starts) {
    for (int c : grid.col_starts) {
      int idx = 0;
      for (int pc = 0; pc < cfg.patch; ++pc) {
        for (int pr = 0; pr < cfg.patch; ++pr) {
          sum(r + pr, c + pc) += patches(idx, col) + means(col);
          weight(r + pr, c + pc) += 1.0;
          ++idx;
        }
      }
      ++col;
    }
  }
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      const double v = weight(i, j) > 0.0 ? sum(i, j) / weight(i, j) : 0.0;
      sum(i, j) = std::clamp(v, 0.0, 255.0);
    }
  }
  return GrayImage(std::move(sum));
}

GrayImage denoise(const GrayImage& img, const Dictionary& d,
                  const PatchConfig& cfg) {
  cfg.check();
  if (d.m() != cfg.patch * cfg.patch) {
    throw DimensionError("denoise: dictionary atom length != patch^2");
  }
  PatchSet set = extract_patches(img, cfg);

  OmpConfig omp;
  omp.k = std::max(1, d.m() / 2);
  omp.residual_tol = cfg.omp_error_gain * cfg.sigma * cfg.patch;

  Matrix approx(set.columns.rows(), set.columns.cols());
  for (long j = 0; j < set.columns.cols(); ++j) {
    const Vector y = set.columns.col(j);
    OmpResult r = omp_encode(d, y, omp);
    Vector fit = Vector::Zero(d.m());
    for (std::size_t t = 0; t < r.support.size(); ++t) {
      fit += d.atoms.col(r.support[t]) * r.coeffs(static_cast<long>(t));
    }
    approx.col(j) = fit;
  }
  return reconstruct_from_patches(approx, set.means, set.image_height,
                                  set.image_width, cfg);
}

Matrix sample_training_patches(const std::vector<GrayImage>& images, int n,
                               int patch, std::uint64_t seed) {
  if (images.empty()) throw ConfigError("sample_training_patches: no images");
  if (n < 1) throw ConfigError("sample_training_patches: n must be >= 1");

  PatchConfig cfg;
  cfg.patch = patch;
  cfg.stride = 1;
  std::vector<PatchGrid> grids;
  std::vector<std::uint64_t> cumulative;
  std::uint64_t total = 0;
  for (const auto& img : images) {
    grids.push_back(patch_grid(img.height(), img.width(), cfg));
    total += grids.back().count();
    cumulative.push_back(total);
  }

  Xoshiro256pp rng(stream_seed(seed, StreamTag::kPatchSample));
  Matrix out(patch * patch, n);
  for (int t = 0; t < n; ++t) {
    const std::uint64_t pick = rng.uniform_below(total);
    std::size_t which = 0;
    while (cumulative[which] <= pick) ++which;
    const std::uint64_t local =
        pick - (which == 0 ? 0 : cumulative[which - 1]);
    const PatchGrid& grid = grids[which];
    const int r = grid.row_starts[local / grid.col_starts.size()];
    const int c = grid.col_starts[local % grid.col_starts.size()];
    Vector v = vectorize_patch(images[which].pixels, r, c, patch);
    out.col(t) = v.array() - v.mean();
  }
  return out;
}

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string magic;
  in >> magic;
  if (magic != "P5") throw IoError(path + ": not a binary PGM (P5)");

  auto next_value = [&in, &path]() -> long {
    // Skip whitespace and '#' comment lines between header fields.
    for (;;) {
      const int c = in.peek();
      if (c == '#') {
        std::string line;
        std::getline(in, line);
      } else if (std::isspace(c)) {
        in.get();
      } else {
        break;
      }
    }
    long v = -1;
    if (!(in >> v)) throw IoError(path + ": truncated PGM header");
    return v;
  };

  const long width = next_value();
  const long height = next_value();
  const long maxval = next_value();
  if (width < 1 || height < 1) throw IoError(path + ": bad dimensions");
  if (maxval != 255) throw IoError(path + ": only maxval 255 supported");
  in.get();  // single whitespace byte after maxval

  std::vector<unsigned char> raw(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(raw.data()), raw.size());
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    throw IoError(path + ": truncated pixel data");
  }
  Matrix pixels(height, width);
  for (long i = 0; i < height; ++i) {
    for (long j = 0; j < width; ++j) {
      pixels(i, j) = static_cast<double>(raw[i * width + j]);
    }
  }
  return GrayImage(std::move(pixels));
}

void write_pgm(const GrayImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  std::vector<unsigned char> raw(static_cast<std::size_t>(img.width()) *
                                 img.height());
  for (int i = 0; i < img.height(); ++i) {
    for (int j = 0; j < img.width(); ++j) {
      const double v = std::clamp(img.pixels(i, j), 0.0, 255.0);
      raw[static_cast<std::size_t>(i) * img.width() + j] =
          static_cast<unsigned char>(std::lround(v));
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()), raw.size());
  if (!out) throw IoError("write failed: " + path);
}

Matrix add_gaussian_noise(const Matrix& pixels, double sigma,
                          std::uint64_t seed) {
  Xoshiro256pp rng(stream_seed(seed, StreamTag::kImageNoise));
  Matrix noisy = pixels;
  for (long i = 0; i < noisy.rows(); ++i) {
    for (long j = 0; j < noisy.cols(); ++j) {
      noisy(i, j) += sigma * rng.gaussian();
    }
  }
  return noisy;
}

}  // namespace blotless
