#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "unireg/errors.hpp"
#include "unireg/kernels.hpp"
#include "unireg/risklab.hpp"

namespace unireg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double penalty(std::size_t k, std::size_t n, double sigma) {
  const double kk = static_cast<double>(k);
  const double nn = static_cast<double>(n);
  return sigma * sigma * (kk / nn) * std::log(std::numbers::e * nn / kk);
}

// One DP layer: cur[i] = min_{k-1 <= j < i} prev[j] + cost(j, i) for i >= k.
void advance(const SegmentPrefix& pre, std::size_t k, const std::vector<double>& prev,
             std::vector<double>& cur) {
  const std::size_t n = pre.size();
  const kernels::Table& t = kernels::table(kernels::active());
  std::fill(cur.begin(), cur.end(), kInf);
  for (std::size_t i = k; i <= n; ++i) {
    cur[i] = t.segment_row_min(pre.sum.data(), pre.sum_sq.data(), prev.data(), i, k - 1, i);
  }
}

}  // namespace

double SegmentPrefix::cost(std::size_t j, std::size_t i) const {
  return kernels::segment_cost(sum.data(), sum_sq.data(), j, i);
}

SegmentPrefix segment_prefix(std::span<const double> theta) {
  require_sequence(theta, "theta*");
  const std::size_t n = theta.size();
  const double mean = std::accumulate(theta.begin(), theta.end(), 0.0) / static_cast<double>(n);
  SegmentPrefix pre;
  pre.sum.assign(n + 1, 0.0);
  pre.sum_sq.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = theta[i] - mean;
    pre.sum[i + 1] = pre.sum[i] + c;
    pre.sum_sq[i + 1] = pre.sum_sq[i] + c * c;
  }
  return pre;
}

std::vector<double> segment_error_curve(std::span<const double> theta, std::size_t max_pieces) {
  const SegmentPrefix pre = segment_prefix(theta);
  const std::size_t n = pre.size();
  if (max_pieces < 1 || max_pieces > n) {
    throw InvalidArgument("segment_error_curve: piece count must be in [1, " + std::to_string(n) + "]");
  }
  std::vector<double> prev(n + 1, kInf);
  std::vector<double> cur(n + 1, kInf);
  prev[0] = 0.0;
  std::vector<double> err;
  err.reserve(max_pieces);
  for (std::size_t k = 1; k <= max_pieces; ++k) {
    advance(pre, k, prev, cur);
    err.push_back(cur[n]);
    std::swap(prev, cur);
  }
  return err;
}

double oracle_rhs(std::span<const double> theta, double sigma) {
  require_sequence(theta, "theta*");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("oracle_rhs: sigma must be >= 0");
  if (!is_monotone(theta, Direction::nondecreasing) && !is_monotone(theta, Direction::nonincreasing)) {
    throw InvalidArgument("oracle_rhs: theta* is not monotone");
  }
  const SegmentPrefix pre = segment_prefix(theta);
  const std::size_t n = pre.size();
  std::vector<double> prev(n + 1, kInf);
  std::vector<double> cur(n + 1, kInf);
  prev[0] = 0.0;
  double best = kInf;
  for (std::size_t k = 1; k <= n; ++k) {
    const double pen = penalty(k, n, sigma);
    if (pen >= best) break;  // err(k) >= 0, and the penalty only grows with k
    advance(pre, k, prev, cur);
    const double err = cur[n];
    best = std::min(best, err / static_cast<double>(n) + pen);
    if (err == 0.0) break;
    std::swap(prev, cur);
  }
  return best;
}

double unimodal_oracle_rhs(std::span<const double> theta, double sigma) {
  require_sequence(theta, "theta*");
  const std::size_t n = theta.size();
  const std::size_t m = smallest_mode(theta);
  if (m == n) return oracle_rhs(theta, sigma);
  const double left = oracle_rhs(theta.first(m), sigma);
  const double right = oracle_rhs(theta.subspan(m), sigma);
  return (static_cast<double>(m) * left + static_cast<double>(n - m) * right) /
         static_cast<double>(n);
}

}  // namespace unireg
