#ifndef BLOTLESS_ERRORS_HPP
#define BLOTLESS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace blotless {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration or argument values (CLI exit code 1).
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Incompatible matrix/pattern dimensions.
class DimensionError : public ConfigError {
public:
  explicit DimensionError(const std::string& what) : ConfigError(what) {}
};

// File format or filesystem problems.
class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(what) {}
};

// Numerical failures: SVD non-convergence, singular KKT systems, rank
// collapse (CLI exit code 2).
class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

// A per-row solve admits more than the one-dimensional scaling family of
// solutions, i.e. recovery of that row is not unique.
class AmbiguousRowError : public NumericalError {
public:
  AmbiguousRowError(int row, const std::string& what)
      : NumericalError(what), row(row) {}
  int row;
};

// The homogeneous coordinate of a TLS singular vector vanished; the row
// solution cannot be rescaled to the affine form.
class ScalingDegenerateError : public NumericalError {
public:
  ScalingDegenerateError(int row, const std::string& what)
      : NumericalError(what), row(row) {}
  int row;
};

// Equality constraints of a QP are rank deficient.
class DegenerateConstraintError : public NumericalError {
public:
  explicit DegenerateConstraintError(const std::string& what)
      : NumericalError(what) {}
};

// Input data lost required rank (e.g. fewer than m nonzero singular values).
class DegenerateDataError : public NumericalError {
public:
  explicit DegenerateDataError(const std::string& what)
      : NumericalError(what) {}
};

// A dictionary column is identically zero.
class ZeroAtomError : public Error {
public:
  ZeroAtomError(int atom, const std::string& what) : Error(what), atom(atom) {}
  int atom;
};

}  // namespace blotless

#endif
