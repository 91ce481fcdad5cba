#pragma once

#include <stdexcept>
#include <string>

namespace ptsym {

/// Malformed or out-of-contract input (non-square matrix, bad lattice, ...).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// An algorithm failed to converge or hit a numerical breakdown.
/// Carries the best residual (or offending pivot value) achieved.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace ptsym
