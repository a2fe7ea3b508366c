#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "unireg/errors.hpp"
#include "unireg/geometry.hpp"
#include "unireg/isotonic.hpp"
#include "unireg/kernels.hpp"
#include "unireg/parallel.hpp"
#include "unireg/rng.hpp"
#include "unireg/unimodal.hpp"

namespace unireg {
namespace {

struct MeanAndError {
  double mean = 0.0;
  double std_err = 0.0;
};

MeanAndError summarize(std::span<const double> xs) {
  MeanAndError out;
  if (xs.empty()) return out;
  const double k = static_cast<double>(xs.size());
  out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.std_err = std::sqrt(ss / (k - 1.0) / k);
  return out;
}

void require_grid(std::span<const double> grid) {
  if (grid.empty()) throw InvalidArgument("radius grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || !std::isfinite(grid[i])) {
      throw InvalidArgument("radius grid entries must be finite and nonnegative");
    }
    if (i > 0 && grid[i] < grid[i - 1]) throw InvalidArgument("radius grid must be increasing");
  }
}

std::size_t piece_count(std::span<const double> theta) {
  const std::size_t m = smallest_mode(theta);
  return distinct_count(theta.first(m)) + distinct_count(theta.subspan(m));
}

}  // namespace

SlicingReport slicing_check(std::span<const double> y, std::span<const double> theta_star,
                            std::span<const double> grid, const SupOptions& options) {
  require_sequence(y, "y");
  require_sequence(theta_star, "theta*");
  require_same_length(y, theta_star);
  if (!is_unimodal(theta_star)) throw InvalidArgument("slicing_check: theta* is not unimodal");
  require_grid(grid);

  const std::size_t n = y.size();
  Sequence z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = y[i] - theta_star[i];
  const UnimodalFit fit = unimodal_lse(y, {.keep_per_mode_sse = false});

  SlicingReport report;
  report.grid.assign(grid.begin(), grid.end());
  report.achieved_radius = kernels::distance(fit.fitted, theta_star);

  auto f = [&](double t) {
    return localized_sup(z, theta_star, t, Region::unimodal(), options) - 0.5 * t * t;
  };
  report.f_on_grid.reserve(grid.size());
  for (double t : grid) report.f_on_grid.push_back(f(t));
  const double r = report.achieved_radius;
  report.f_at_achieved = f(r);

  Sequence offset(n);
  for (std::size_t i = 0; i < n; ++i) offset[i] = fit.fitted[i] - theta_star[i];
  report.attainment_gap = report.f_at_achieved - (kernels::dot(z, offset) - 0.5 * r * r);

  report.max_f_on_grid = *std::max_element(report.f_on_grid.begin(), report.f_on_grid.end());
  report.signed_gap = report.max_f_on_grid - report.f_at_achieved;
  report.identity_gap = std::max(0.0, report.signed_gap);

  for (std::size_t i = 1; i < grid.size(); ++i) {
    report.grid_spacing = std::max(report.grid_spacing, grid[i] - grid[i - 1]);
  }
  std::size_t k = grid.size();
  while (k > 0 && report.f_on_grid[k - 1] < 0.0) --k;
  if (k < grid.size()) {
    report.has_negative_tail = true;
    report.negative_tail_start = grid[k];
    report.termination_holds = r < report.negative_tail_start + report.grid_spacing;
  }
  return report;
}

StatDimEstimate statistical_dimension_mc(std::size_t n, std::size_t replications,
                                         std::uint64_t seed, const StatDimOptions& options) {
  if (n < 1) throw InvalidArgument("statistical_dimension_mc: n must be >= 1");
  if (replications < 2) throw InvalidArgument("statistical_dimension_mc: need >= 2 replications");

  const std::size_t checked = std::min(options.pointwise_subsample, replications);
  std::vector<double> sq_norms(replications);
  std::vector<double> pointwise(checked, 0.0);
  const Sequence origin(n, 0.0);

  parallel_for(replications, options.threads, [&](std::size_t r) {
    SplitMix64 rng = make_stream(seed, n, r);
    Sequence z(n);
    fill_standard_normal(rng, z);
    const IsotonicFit proj = pava(z, Direction::nondecreasing);
    sq_norms[r] = kernels::squared_norm(proj.fitted);
    if (r < checked) {
      const double sup = localized_sup(z, origin, 1.0, Region::mode_cone(n));
      pointwise[r] = std::abs(std::sqrt(sq_norms[r]) - sup);
    }
  });

  StatDimEstimate est;
  const MeanAndError s = summarize(sq_norms);
  est.estimate = s.mean;
  est.std_err = s.std_err;
  est.log_en_bound = 1.0 + std::log(static_cast<double>(n));
  est.replications = replications;
  est.pointwise_checked = checked;
  if (checked > 0) est.pointwise_max_error = *std::max_element(pointwise.begin(), pointwise.end());
  return est;
}

LipschitzReport lipschitz_check(std::span<const double> theta_star, double t, Region region,
                                std::size_t pairs, std::uint64_t seed) {
  require_sequence(theta_star, "theta*");
  if (!(t >= 0.0)) throw InvalidArgument("lipschitz_check: radius must be nonnegative");
  const std::size_t n = theta_star.size();
  LipschitzReport report;
  report.pairs = pairs;
  if (t == 0.0) return report;

  Sequence z(n);
  Sequence w(n);
  for (std::size_t i = 0; i < pairs; ++i) {
    SplitMix64 rng = make_stream(seed, i, 0);
    fill_standard_normal(rng, z);
    fill_standard_normal(rng, w);
    // Alternate independent pairs with nearby pairs.
    if (i % 2 == 1) kernels::axpy(w, z, 0.25, w);
    const double fz = localized_sup(z, theta_star, t, region);
    const double fw = localized_sup(w, theta_star, t, region);
    if (!std::isfinite(fz) || !std::isfinite(fw)) {
      throw InvalidArgument("lipschitz_check: region does not meet the ball around theta*");
    }
    const double dist = kernels::distance(z, w);
    if (dist > 0.0) report.max_ratio = std::max(report.max_ratio, std::abs(fz - fw) / dist);
  }
  return report;
}

double concavity_check(std::span<const double> z, std::span<const double> theta_star,
                       std::size_t mode, std::span<const double> grid) {
  require_sequence(z, "z");
  require_sequence(theta_star, "theta*");
  require_same_length(z, theta_star);
  require_grid(grid);
  const double d = distance_to_mode_cone(theta_star, mode);
  if (grid.front() < d - 1e-12 * (1.0 + d)) {
    throw InvalidArgument("concavity_check: grid starts below the distance to C_m");
  }
  auto g = [&](double t) { return localized_sup(z, theta_star, t, Region::mode_cone(mode)); };

  std::vector<double> values;
  values.reserve(grid.size());
  for (double t : grid) values.push_back(g(t));
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double chord = 0.5 * (values[i - 1] + values[i + 1]);
    const double mid = g(0.5 * (grid[i - 1] + grid[i + 1]));
    worst = std::max(worst, chord - mid);
  }
  return worst;
}

SubGaussianMaxReport subgaussian_max_check(std::span<const double> theta_star, double t,
                                           std::size_t count, std::size_t trials,
                                           std::size_t pilot, std::uint64_t seed,
                                           unsigned threads) {
  require_sequence(theta_star, "theta*");
  if (!is_unimodal(theta_star)) throw InvalidArgument("subgaussian_max_check: theta* not unimodal");
  if (count < 1 || trials < 1 || pilot < 2) throw InvalidArgument("subgaussian_max_check: bad sizes");
  const std::size_t n = theta_star.size();

  auto draw = [&](std::uint64_t stream, std::uint64_t index) {
    SplitMix64 rng = make_stream(seed, stream, index);
    Sequence z(n);
    fill_standard_normal(rng, z);
    return localized_sup(z, theta_star, t, Region::unimodal());
  };

  std::vector<double> pilot_values(pilot);
  parallel_for(pilot, threads, [&](std::size_t j) { pilot_values[j] = draw(1, j); });

  std::vector<double> maxima(trials);
  parallel_for(trials, threads, [&](std::size_t k) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i) best = std::max(best, draw(2, k * count + i));
    maxima[k] = best;
  });

  SubGaussianMaxReport report;
  report.mean_estimate = summarize(pilot_values).mean;
  report.threshold =
      report.mean_estimate +
      t * (std::sqrt(2.0 * std::log(static_cast<double>(count))) + std::sqrt(2.0 * std::numbers::pi));
  report.trials = trials;
  report.exceedances = static_cast<std::size_t>(
      std::count_if(maxima.begin(), maxima.end(), [&](double x) { return x > report.threshold; }));
  report.exceed_fraction = static_cast<double>(report.exceedances) / static_cast<double>(trials);
  return report;
}

double width_bound_worst_case(std::size_t n, double range, double t) {
  const double nn = static_cast<double>(n);
  return std::pow(nn, 0.25) * std::sqrt(t) * std::sqrt(range + 1.0) + t * std::sqrt(std::log(nn)) +
         t * t / 8.0;
}

double width_bound_piecewise(std::size_t n, std::size_t pieces, double alpha, double t) {
  const double nn = static_cast<double>(n);
  const double s = static_cast<double>(pieces);
  return 2.0 * t * std::sqrt(s * std::log(std::numbers::e * nn / s)) +
         2.0 * t * std::sqrt(2.0 * s * (alpha + 2.0) * std::log(nn));
}

WidthEstimate localized_width_mc(std::span<const double> theta_star,
                                 std::span<const double> t_grid, std::size_t replications,
                                 std::uint64_t seed, const WidthOptions& options) {
  require_sequence(theta_star, "theta*");
  if (!is_unimodal(theta_star)) throw InvalidArgument("localized_width_mc: theta* not unimodal");
  require_grid(t_grid);
  if (replications < 1) throw InvalidArgument("localized_width_mc: need >= 1 replication");
  const std::size_t n = theta_star.size();
  const std::size_t points = t_grid.size();

  // values[r * points + j] = sup at radius t_j for draw r
  std::vector<double> values(replications * points);
  parallel_for(replications, options.threads, [&](std::size_t r) {
    SplitMix64 rng = make_stream(seed, n, r);
    Sequence z(n);
    fill_standard_normal(rng, z);
    for (std::size_t j = 0; j < points; ++j) {
      values[r * points + j] = localized_sup(z, theta_star, t_grid[j], Region::unimodal());
    }
  });

  WidthEstimate est;
  est.t_grid.assign(t_grid.begin(), t_grid.end());
  est.replications = replications;
  est.seed = seed;
  const double range = range_of(theta_star);
  const std::size_t pieces = piece_count(theta_star);
  std::vector<double> column(replications);
  for (std::size_t j = 0; j < points; ++j) {
    for (std::size_t r = 0; r < replications; ++r) column[r] = values[r * points + j];
    const MeanAndError s = summarize(column);
    est.mean_sup.push_back(s.mean);
    est.std_err.push_back(s.std_err);
    const double t = t_grid[j];
    const double bound = options.bound == WidthBound::worst_case
                             ? width_bound_worst_case(n, range, t)
                             : width_bound_piecewise(n, pieces, options.alpha, t);
    est.bound_curve.push_back(bound);
    const double ratio = bound > 0.0 ? s.mean / bound : 0.0;
    est.ratio.push_back(ratio);
    est.max_ratio = std::max(est.max_ratio, ratio);
  }
  return est;
}

}  // namespace unireg
