#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace delaystab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension mismatch between states, systems or matrices.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the mathematical domain of an operation
/// (nonpositive witness entries, m <= 0 in the residue partition, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A system or solver was asked to do something its configuration forbids,
/// e.g. a Poincare map on a system without a period.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A stability hypothesis was observed to be violated (|c_i(m)| >= 1,
/// |c_i(m)| > c in the lambda scan, ...).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Malformed model specification.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Should be unreachable when the inputs meet the documented preconditions.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Simulation produced a non-finite value.
class DivergenceError : public Error {
 public:
  DivergenceError(std::int64_t step, std::size_t channel);

  std::int64_t step() const noexcept { return step_; }
  std::size_t channel() const noexcept { return channel_; }

 private:
  std::int64_t step_;
  std::size_t channel_;
};

/// Fixed-point iteration of the Poincare map did not reach the tolerance.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> residual_history);

  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

/// Model config text could not be parsed. `byte_offset` points into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset);

  std::size_t byte_offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace delaystab
