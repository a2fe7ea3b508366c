#pragma once

// Euclidean projection onto the monotone cones by pool-adjacent-violators,
// plus the linear-time prefix/suffix projection-error scans used by the
// unimodal estimator.

#include <cstddef>
#include <span>
#include <vector>

#include "unireg/sequence.hpp"

namespace unireg {

/// A run of consecutive observations pooled to a common level.
struct PavaBlock {
  std::size_t start = 0;  // 0-based index of the first element
  std::size_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  // SSE of this block plus every block below it on the stack.
  double cumulative_sse = 0.0;

  double level() const noexcept { return sum / static_cast<double>(count); }
  double sse() const noexcept;
};

/// Online PAVA state. After pushing y_1..y_m the blocks describe the monotone
/// projection of that prefix, and sse() is its squared error; each push costs
/// amortized O(1).
///
/// Adjacent blocks are merged when they violate the order or when their
/// levels agree within merge_tolerance, so block levels are strictly ordered.
class PavaBlockStack {
 public:
  static constexpr double merge_tolerance = 1e-12;

  explicit PavaBlockStack(Direction direction = Direction::nondecreasing,
                          std::size_t capacity_hint = 0);

  void push(double value);

  /// Number of observations absorbed so far.
  std::size_t size() const noexcept { return n_; }
  double sse() const noexcept { return blocks_.empty() ? 0.0 : blocks_.back().cumulative_sse; }
  std::span<const PavaBlock> blocks() const noexcept { return blocks_; }
  Direction direction() const noexcept { return direction_; }

  /// Writes the fitted values (block levels); `out` must have size() entries.
  void write_fitted(std::span<double> out) const;

 private:
  bool violates(const PavaBlock& lower, const PavaBlock& upper) const noexcept;
  void restack_top();

  Direction direction_;
  std::vector<PavaBlock> blocks_;
  std::size_t n_ = 0;
};

struct IsotonicFit {
  Sequence fitted;
  double sse = 0.0;
  Direction direction = Direction::nondecreasing;
};

/// Projection of y onto {nondecreasing} or {nonincreasing} sequences.
IsotonicFit pava(std::span<const double> y, Direction direction);

/// p[m] for m = 0..n: squared error of the best monotone fit to y_1..y_m.
/// p[0] = 0 and p is nondecreasing.
std::vector<double> prefix_isotonic_sse(std::span<const double> y, Direction direction);

/// s[k] for k = 0..n: squared error of the best nonincreasing fit to the
/// 0-based suffix y[k..n-1]; s[n] = 0. In 1-based terms s[k] is the error of
/// y_{k+1..n}.
std::vector<double> suffix_antitonic_sse(std::span<const double> y);

}  // namespace unireg
