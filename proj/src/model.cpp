#include "blotless/model.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "blotless/errors.hpp"

namespace blotless {

Dictionary::Dictionary(Matrix a) : atoms(std::move(a)) {
  require_finite(atoms, "Dictionary");
  for (int j = 0; j < atoms.cols(); ++j) {
    if (atoms.col(j).norm() == 0.0) {
      throw ZeroAtomError(j, "Dictionary: atom " + std::to_string(j) +
                                 " is the zero vector");
    }
  }
}

SupportPattern::SupportPattern(int l, int n) : l(l), n(n), rows(l) {
  if (l < 1 || n < 1) throw DimensionError("SupportPattern: l, n must be >= 1");
}

void SupportPattern::check() const {
  if (static_cast<int>(rows.size()) != l) {
    throw DimensionError("SupportPattern: row count mismatch");
  }
  for (const auto& row : rows) {
    int prev = -1;
    for (int j : row) {
      if (j <= prev || j >= n) {
        throw DimensionError("SupportPattern: indices must be strictly "
                             "increasing within [0, n)");
      }
      prev = j;
    }
  }
}

std::size_t SupportPattern::size() const {
  std::size_t total = 0;
  for (const auto& row : rows) total += row.size();
  return total;
}

bool SupportPattern::contains(int i, int j) const {
  const auto& row = rows[i];
  return std::binary_search(row.begin(), row.end(), j);
}

SupportPattern SupportPattern::from_nonzeros(const Matrix& x) {
  SupportPattern p(static_cast<int>(x.rows()), static_cast<int>(x.cols()));
  for (int i = 0; i < p.l; ++i) {
    for (int j = 0; j < p.n; ++j) {
      if (x(i, j) != 0.0) p.rows[i].push_back(j);
    }
  }
  return p;
}

std::string SupportPattern::to_json() const {
  nlohmann::json j;
  j["l"] = l;
  j["n"] = n;
  j["rows"] = rows;
  return j.dump();
}

SupportPattern SupportPattern::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SupportPattern p(j.at("l").get<int>(), j.at("n").get<int>());
  p.rows = j.at("rows").get<std::vector<std::vector<int>>>();
  p.check();
  return p;
}

SparseCoeffs::SparseCoeffs(Matrix v, SupportPattern p)
    : values(std::move(v)), pattern(std::move(p)) {
  pattern.check();
  if (values.rows() != pattern.l || values.cols() != pattern.n) {
    throw DimensionError("SparseCoeffs: values shape does not match pattern");
  }
  for (int i = 0; i < pattern.l; ++i) {
    for (int j = 0; j < pattern.n; ++j) {
      if (values(i, j) != 0.0 && !pattern.contains(i, j)) {
        throw DimensionError("SparseCoeffs: nonzero entry off the pattern at (" +
                             std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
}

SparseCoeffs project_to_pattern(const Matrix& x, const SupportPattern& pattern) {
  if (x.rows() != pattern.l || x.cols() != pattern.n) {
    throw DimensionError("project_to_pattern: dimension mismatch");
  }
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (int i = 0; i < pattern.l; ++i) {
    for (int j : pattern.rows[i]) out(i, j) = x(i, j);
  }
  SparseCoeffs result;
  result.values = std::move(out);
  result.pattern = pattern;
  return result;
}

NormalizeResult normalize(const Dictionary& d) {
  NormalizeResult result;
  result.scaling = Vector(d.l());
  Matrix atoms = d.atoms;
  for (int j = 0; j < d.l(); ++j) {
    const double norm = atoms.col(j).norm();
    if (norm == 0.0) {
      throw ZeroAtomError(j, "normalize: atom " + std::to_string(j) +
                                 " is the zero vector");
    }
    atoms.col(j) /= norm;
    result.scaling(j) = norm;
  }
  result.dict.atoms = std::move(atoms);
  return result;
}

Matrix apply_scaling(const Matrix& coeffs, const Vector& scaling) {
  if (coeffs.rows() != scaling.size()) {
    throw DimensionError("apply_scaling: row count does not match scaling");
  }
  return scaling.asDiagonal() * coeffs;
}

}  // namespace blotless
