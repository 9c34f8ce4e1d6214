#ifndef BLOTLESS_MODEL_HPP
#define BLOTLESS_MODEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blotless/matrix.hpp"

namespace blotless {

// Dictionary of l atoms (columns) in R^m. Construction rejects zero atoms;
// columns are not required to be unit norm until normalize() is applied.
struct Dictionary {
  Matrix atoms;

  Dictionary() = default;
  explicit Dictionary(Matrix a);

  int m() const { return static_cast<int>(atoms.rows()); }
  int l() const { return static_cast<int>(atoms.cols()); }
};

// Support set Omega of an l x n coefficient matrix, stored per row as sorted
// strictly-increasing 0-based column indices.
struct SupportPattern {
  int l = 0;
  int n = 0;
  std::vector<std::vector<int>> rows;

  SupportPattern() = default;
  SupportPattern(int l, int n);

  // Validates index ranges and ordering.
  void check() const;

  std::size_t size() const;  // |Omega|
  bool contains(int i, int j) const;

  // Zero/nonzero mask of x, entries with |x| > 0 exactly.
  static SupportPattern from_nonzeros(const Matrix& x);

  std::string to_json() const;
  static SupportPattern from_json(const std::string& text);
};

// Coefficient matrix constrained to a support pattern: every entry outside
// the pattern is exactly zero.
struct SparseCoeffs {
  Matrix values;
  SupportPattern pattern;

  SparseCoeffs() = default;
  SparseCoeffs(Matrix values, SupportPattern pattern);

  int l() const { return pattern.l; }
  int n() const { return pattern.n; }
};

struct TrainingSet {
  Matrix samples;  // m x n
  std::optional<Dictionary> true_dictionary;
  std::optional<SparseCoeffs> true_coeffs;
  std::uint64_t seed = 0;
  double theta = 0.0;
  std::optional<double> snr_db;
};

// Copies entries of x on the pattern and zeroes the rest.
SparseCoeffs project_to_pattern(const Matrix& x, const SupportPattern& pattern);

struct NormalizeResult {
  Dictionary dict;
  Vector scaling;  // original column norms
};

// Rescales every atom to unit l2 norm and returns the original norms, so a
// caller holding coefficients X can keep the product D X unchanged via
// apply_scaling(X, scaling). Throws ZeroAtomError naming the offending atom.
NormalizeResult normalize(const Dictionary& d);

// Row i of coeffs multiplied by scaling(i); the counterpart of normalize().
Matrix apply_scaling(const Matrix& coeffs, const Vector& scaling);

}  // namespace blotless

#endif
