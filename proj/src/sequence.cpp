#include "unireg/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "unireg/errors.hpp"

namespace unireg {

std::string_view to_string(Direction d) noexcept {
  return d == Direction::nondecreasing ? "nondecreasing" : "nonincreasing";
}

void require_sequence(std::span<const double> y, std::string_view name) {
  if (y.empty()) {
    throw InvalidArgument(std::string(name) + " must be nonempty");
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i])) {
      throw InvalidArgument(std::string(name) + " has a non-finite entry at position " +
                            std::to_string(i + 1));
    }
  }
}

void require_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("sequence lengths differ: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  }
}

bool is_monotone(std::span<const double> y, Direction d, double tol) {
  for (std::size_t i = 1; i < y.size(); ++i) {
    const double step = y[i] - y[i - 1];
    if (d == Direction::nondecreasing ? step < -tol : step > tol) return false;
  }
  return true;
}

bool is_unimodal(std::span<const double> y, double tol) {
  std::size_t i = 1;
  while (i < y.size() && y[i] >= y[i - 1] - tol) ++i;
  while (i < y.size() && y[i] <= y[i - 1] + tol) ++i;
  return i >= y.size();
}

std::size_t smallest_mode(std::span<const double> y) {
  if (y.empty()) throw InvalidArgument("smallest_mode: empty sequence");
  if (!is_unimodal(y)) throw InvalidArgument("smallest_mode: sequence is not unimodal");
  const auto it = std::max_element(y.begin(), y.end());
  return static_cast<std::size_t>(it - y.begin()) + 1;
}

std::size_t distinct_count(std::span<const double> y) {
  std::vector<double> v(y.begin(), y.end());
  std::sort(v.begin(), v.end());
  return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

double range_of(std::span<const double> y) {
  if (y.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  return *hi - *lo;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points == 0) throw InvalidArgument("linear_grid: need at least one point");
  if (!(hi >= lo)) throw InvalidArgument("linear_grid: hi must be >= lo");
  std::vector<double> grid(points, lo);
  if (points == 1) return grid;
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = lo + step * static_cast<double>(i);
  grid.back() = hi;
  return grid;
}

}  // namespace unireg
