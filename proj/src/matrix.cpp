#include "blotless/matrix.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "blotless/errors.hpp"

namespace blotless {

void require_finite(const Matrix& a, const char* what) {
  if (a.rows() <= 0 || a.cols() <= 0) {
    throw DimensionError(std::string(what) + ": empty matrix");
  }
  if (!a.allFinite()) {
    throw NumericalError(std::string(what) + ": non-finite entries");
  }
}

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Matrix read_matrix(std::istream& in) {
  long rows = 0, cols = 0;
  if (!(in >> rows >> cols)) throw IoError("matrix header: expected 'rows cols'");
  if (rows <= 0 || cols <= 0) throw IoError("matrix header: non-positive dimensions");
  Matrix a(rows, cols);
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) {
      double v;
      if (!(in >> v)) {
        throw IoError("matrix body: expected " + std::to_string(rows * cols) +
                      " values");
      }
      a(i, j) = v;
    }
  }
  require_finite(a, "read_matrix");
  return a;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Matrix& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  for (long i = 0; i < a.rows(); ++i) {
    for (long j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      out << format_full(a(i, j));
    }
    out << '\n';
  }
}

void write_matrix_file(const std::string& path, const Matrix& a) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_matrix(out, a);
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace blotless
