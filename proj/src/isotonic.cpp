#include "unireg/isotonic.hpp"

#include <algorithm>
#include <numeric>

#include "unireg/errors.hpp"

namespace unireg {

double PavaBlock::sse() const noexcept {
  const double v = sum_sq - (sum * sum) / static_cast<double>(count);
  return v > 0.0 ? v : 0.0;
}

PavaBlockStack::PavaBlockStack(Direction direction, std::size_t capacity_hint)
    : direction_(direction) {
  blocks_.reserve(capacity_hint);
}

bool PavaBlockStack::violates(const PavaBlock& lower, const PavaBlock& upper) const noexcept {
  const double diff = direction_ == Direction::nondecreasing ? lower.level() - upper.level()
                                                             : upper.level() - lower.level();
  return diff >= -merge_tolerance;
}

void PavaBlockStack::push(double value) {
  blocks_.push_back(PavaBlock{n_, 1, value, value * value, 0.0});
  ++n_;
  restack_top();
}

void PavaBlockStack::restack_top() {
  while (blocks_.size() >= 2 && violates(blocks_[blocks_.size() - 2], blocks_.back())) {
    const PavaBlock top = blocks_.back();
    blocks_.pop_back();
    PavaBlock& below = blocks_.back();
    below.count += top.count;
    below.sum += top.sum;
    below.sum_sq += top.sum_sq;
  }
  PavaBlock& top = blocks_.back();
  const double base = blocks_.size() >= 2 ? blocks_[blocks_.size() - 2].cumulative_sse : 0.0;
  top.cumulative_sse = base + top.sse();
}

void PavaBlockStack::write_fitted(std::span<double> out) const {
  if (out.size() != n_) throw InvalidArgument("write_fitted: output has the wrong length");
  for (const PavaBlock& b : blocks_) {
    std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(b.start), b.count, b.level());
  }
}

IsotonicFit pava(std::span<const double> y, Direction direction) {
  require_sequence(y, "pava input");
  PavaBlockStack stack(direction, y.size());
  for (double v : y) stack.push(v);

  IsotonicFit fit;
  fit.direction = direction;
  fit.fitted.resize(y.size());
  stack.write_fitted(fit.fitted);
  double sse = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - fit.fitted[i];
    sse += r * r;
  }
  fit.sse = sse;
  return fit;
}

std::vector<double> prefix_isotonic_sse(std::span<const double> y, Direction direction) {
  require_sequence(y, "prefix scan input");
  // SSE is shift-invariant; centering keeps sum_sq - sum^2/count well conditioned.
  const double shift =
      std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  PavaBlockStack stack(direction, y.size());
  std::vector<double> p(y.size() + 1, 0.0);
  for (std::size_t m = 0; m < y.size(); ++m) {
    stack.push(y[m] - shift);
    // Rounding can make the cumulative value dip by an ulp; p must stay monotone.
    p[m + 1] = std::max(p[m], stack.sse());
  }
  return p;
}

std::vector<double> suffix_antitonic_sse(std::span<const double> y) {
  require_sequence(y, "suffix scan input");
  std::vector<double> reversed(y.rbegin(), y.rend());
  // y[k..n-1] nonincreasing  <=>  its reversal is nondecreasing.
  const std::vector<double> p = prefix_isotonic_sse(reversed, Direction::nondecreasing);
  const std::size_t n = y.size();
  std::vector<double> s(n + 1, 0.0);
  for (std::size_t k = 0; k <= n; ++k) s[k] = p[n - k];
  return s;
}

}  // namespace unireg
