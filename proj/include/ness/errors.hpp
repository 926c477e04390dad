#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ness {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape mismatch (non-square input, incompatible block sizes).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Matrix expected to be Hermitian is not.
class SymmetryError : public Error {
 public:
  SymmetryError(const std::string& what, double deviation) : Error(what), deviation_(deviation) {}
  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

/// Iterative algorithm (eigensolver, quadrature refinement) failed to converge.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t index) : Error(what), index_(index) {}
  /// Eigensolvers: index of the entry that did not deflate. Quadrature: refinement level.
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Singular or numerically singular matrix.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, std::size_t index) : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Argument outside the domain of a function (momentum, site, chemical potential, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Correlation-matrix eigenvalue outside [0, 1] beyond tolerance.
class SpectrumError : public Error {
 public:
  SpectrumError(const std::string& what, double eigenvalue) : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// A logarithm or power left the principal branch in a way the caller must see.
class BranchError : public Error {
 public:
  using Error::Error;
};

/// Formula requires a finite voltage bias.
class BiasError : public Error {
 public:
  using Error::Error;
};

/// Request outside the set of configurations a closed form covers.
class ScopeError : public Error {
 public:
  using Error::Error;
};

/// Malformed experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ness
