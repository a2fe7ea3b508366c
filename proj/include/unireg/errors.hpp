#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace unireg {

/// Bad input: empty or non-finite sequences, out-of-range parameters.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A brute-force reference was asked to run beyond its enumeration limit.
class SizeLimitExceeded : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// An iterative solver ran out of iterations. Carries the last iterate and
/// the residual gap at the point it gave up.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate, double gap);

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
  double gap() const noexcept { return gap_; }

 private:
  std::vector<double> last_iterate_;
  double gap_;
};

/// Alternating projections detected an empty intersection.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace unireg
