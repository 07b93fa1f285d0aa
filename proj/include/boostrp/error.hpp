#ifndef BOOSTRP_ERROR_HPP
#define BOOSTRP_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace boostrp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension or column-count mismatch.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text (CSV cell, model file line).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row)
      : Error(what + " (row " + std::to_string(row) + ")"), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Values that parse but violate a domain invariant (e.g. a label outside {0,1}).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An output column that carries no information for the requested operation.
class DegenerateOutputError : public Error {
 public:
  DegenerateOutputError(const std::string& what, std::size_t output)
      : Error(what + " (output " + std::to_string(output) + ")"), output_(output) {}
  std::size_t output() const noexcept { return output_; }

 private:
  std::size_t output_;
};

/// Scalar minimizer ran out of iterations.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Per-output step-length search failed; carries the output index.
class LineSearchError : public Error {
 public:
  LineSearchError(const std::string& what, std::size_t output)
      : Error(what + " (output " + std::to_string(output) + ")"), output_(output) {}
  std::size_t output() const noexcept { return output_; }

 private:
  std::size_t output_;
};

/// Invalid configuration: parameters out of range or incompatible loss/task.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Partition sizes cannot satisfy the requested fractions.
class SizingError : public Error {
 public:
  using Error::Error;
};

class RelabelError : public Error {
 public:
  using Error::Error;
};

/// Operation not defined for this model kind (e.g. probabilities of a regressor).
class ModeError : public Error {
 public:
  using Error::Error;
};

/// A metric that is undefined on the given input.
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace boostrp

#endif  // BOOSTRP_ERROR_HPP
