#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace alab {

/// Invalid configuration (parameters outside their admissible set).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A geometric or analytic precondition failed: radius outside the window,
/// empty index set, unsupported dimension, cost guard.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iterative solve did not reach its residual target.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual, int iterations,
              std::int64_t sample = -1)
      : std::runtime_error(what),
        residual_(residual),
        iterations_(iterations),
        sample_(sample) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }
  /// Index of the ensemble sample being solved, -1 outside an estimator.
  std::int64_t sample() const noexcept { return sample_; }

 private:
  double residual_;
  int iterations_;
  std::int64_t sample_;
};

}  // namespace alab
