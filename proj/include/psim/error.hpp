#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace psim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched vector or matrix shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed or non-finite input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Requested future window runs past the end of the trajectory.
class WindowUnavailable : public Error {
 public:
  WindowUnavailable(std::int64_t start, std::int64_t k, std::int64_t length)
      : Error("future window unavailable: start=" + std::to_string(start) +
              " k=" + std::to_string(k) + " length=" + std::to_string(length)),
        start_(start),
        k_(k),
        length_(length) {}

  std::int64_t start() const { return start_; }
  std::int64_t k() const { return k_; }
  std::int64_t length() const { return length_; }

 private:
  std::int64_t start_, k_, length_;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (final residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class NotObservable : public Error {
 public:
  using Error::Error;
};

/// A rollout produced a non-finite predictive state.
class DivergedRollout : public Error {
 public:
  explicit DivergedRollout(std::int64_t step)
      : Error("rollout diverged at step " + std::to_string(step)), step_(step) {}
  std::int64_t step() const { return step_; }

 private:
  std::int64_t step_;
};

/// Invalid user configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace psim
