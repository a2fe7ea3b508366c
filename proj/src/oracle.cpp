#include "unireg/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "unireg/errors.hpp"
#include "unireg/risklab.hpp"
#include "unireg/unimodal.hpp"

namespace unireg::oracle {
namespace {

constexpr double kOrderTolerance = 1e-12;

void guard(std::size_t n, std::size_t limit, const char* what) {
  if (n > limit) {
    throw SizeLimitExceeded(std::string(what) + ": n = " + std::to_string(n) +
                            " exceeds the brute-force limit " + std::to_string(limit));
  }
}

// Block-mean candidate for the partition whose cut after position i (0-based)
// is bit i of `cuts`.
Sequence block_means(std::span<const double> y, std::uint32_t cuts) {
  const std::size_t n = y.size();
  Sequence out(n);
  std::size_t start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool last = i + 1 == n || ((cuts >> i) & 1U) != 0;
    if (!last) continue;
    double sum = 0.0;
    for (std::size_t j = start; j <= i; ++j) sum += y[j];
    const double mean = sum / static_cast<double>(i + 1 - start);
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(start),
              out.begin() + static_cast<std::ptrdiff_t>(i + 1), mean);
    start = i + 1;
  }
  return out;
}

double sse(std::span<const double> y, std::span<const double> fit) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - fit[i]) * (y[i] - fit[i]);
  return s;
}

template <class Feasible>
Sequence best_partition(std::span<const double> y, Feasible&& feasible) {
  const std::size_t n = y.size();
  const std::uint32_t count = n == 0 ? 1U : (1U << (n - 1));
  Sequence best;
  double best_sse = std::numeric_limits<double>::infinity();
  for (std::uint32_t cuts = 0; cuts < count; ++cuts) {
    Sequence cand = block_means(y, cuts);
    if (!feasible(cand)) continue;
    const double s = sse(y, cand);
    if (s < best_sse) {
      best_sse = s;
      best = std::move(cand);
    }
  }
  return best;
}

double total_sum_of_squares(std::span<const double> y) {
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double tss = 0.0;
  for (double v : y) tss += (v - mean) * (v - mean);
  return tss;
}

}  // namespace

Sequence brute_monotone_projection(std::span<const double> y, Direction direction) {
  require_sequence(y, "oracle input");
  guard(y.size(), kMaxMonotoneSize, "brute_monotone_projection");
  return best_partition(y, [direction](const Sequence& c) {
    return is_monotone(c, direction, kOrderTolerance);
  });
}

UnimodalResult brute_unimodal_projection(std::span<const double> y) {
  require_sequence(y, "oracle input");
  guard(y.size(), kMaxUnimodalSize, "brute_unimodal_projection");
  const std::size_t n = y.size();

  std::vector<Sequence> fits(n);
  std::vector<double> errors(n);
  for (std::size_t m = 1; m <= n; ++m) {
    Sequence fit = brute_monotone_projection(y.first(m), Direction::nondecreasing);
    if (m < n) {
      const Sequence tail = brute_monotone_projection(y.subspan(m), Direction::nonincreasing);
      fit.insert(fit.end(), tail.begin(), tail.end());
    }
    errors[m - 1] = sse(y, fit);
    fits[m - 1] = std::move(fit);
  }
  const double best = *std::min_element(errors.begin(), errors.end());
  const double window = best + kModeTieTolerance * total_sum_of_squares(y);
  std::size_t split = 1;
  while (errors[split - 1] > window) ++split;

  UnimodalResult out;
  out.split = split;
  out.fitted = std::move(fits[split - 1]);
  out.sse = errors[split - 1];
  out.mode = static_cast<std::size_t>(std::max_element(out.fitted.begin(), out.fitted.end()) -
                                      out.fitted.begin()) +
             1;
  return out;
}

Sequence brute_mode_cone_projection(std::span<const double> y, std::size_t mode) {
  require_sequence(y, "oracle input");
  guard(y.size(), kMaxMonotoneSize, "brute_mode_cone_projection");
  if (mode < 1 || mode > y.size()) throw InvalidArgument("brute_mode_cone_projection: mode out of range");
  return best_partition(y, [mode](const Sequence& c) { return in_mode_cone(c, mode, kOrderTolerance); });
}

double exhaustive_segment_error(std::span<const double> theta, std::size_t k) {
  require_sequence(theta, "oracle input");
  const std::size_t n = theta.size();
  guard(n, kMaxSegmentSize, "exhaustive_segment_error");
  if (k < 1 || k > n) throw InvalidArgument("exhaustive_segment_error: k must be in [1, n]");
  const SegmentPrefix pre = segment_prefix(theta);
  const std::uint32_t count = 1U << (n - 1);
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t cuts = 0; cuts < count; ++cuts) {
    if (static_cast<std::size_t>(std::popcount(cuts)) != k - 1) continue;
    double total = 0.0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i + 1 == n || ((cuts >> i) & 1U) != 0) {
        total += pre.cost(start, i + 1);
        start = i + 1;
      }
    }
    best = std::min(best, total);
  }
  return best;
}

}  // namespace unireg::oracle
