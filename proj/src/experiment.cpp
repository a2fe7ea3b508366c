#include <algorithm>
#include <cmath>
#include <string>

#include "unireg/errors.hpp"
#include "unireg/isotonic.hpp"
#include "unireg/kernels.hpp"
#include "unireg/parallel.hpp"
#include "unireg/risklab.hpp"
#include "unireg/unimodal.hpp"

namespace unireg {
namespace {

struct Prepared {
  std::size_t n = 0;
  GeneratedSignal signal;
  Direction direction = Direction::nondecreasing;
  bool monotone = false;
};

Prepared prepare(const ExperimentConfig& config, std::size_t n) {
  Prepared p;
  p.n = n;
  p.signal = generate_signal(config.signal, n);
  if (is_monotone(p.signal.theta, Direction::nondecreasing)) {
    p.monotone = true;
  } else if (is_monotone(p.signal.theta, Direction::nonincreasing)) {
    p.monotone = true;
    p.direction = Direction::nonincreasing;
  }
  return p;
}

double loss(const ExperimentConfig& config, const Prepared& p, std::size_t rep) {
  SplitMix64 rng = make_stream(config.seed, p.n, rep);
  Sequence y = generate_noise(config.noise, p.n, rng);
  for (std::size_t i = 0; i < p.n; ++i) y[i] += p.signal.theta[i];
  const Sequence fitted = config.estimator == Estimator::unimodal
                              ? unimodal_lse(y, {.keep_per_mode_sse = false}).fitted
                              : pava(y, p.direction).fitted;
  return kernels::squared_distance(fitted, p.signal.theta) / static_cast<double>(p.n);
}

}  // namespace

std::string_view to_string(Estimator e) noexcept {
  return e == Estimator::unimodal ? "unimodal" : "isotonic";
}

void validate_config(const ExperimentConfig& config) {
  if (config.n_grid.empty()) throw InvalidArgument("n_grid is empty");
  for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
    if (config.n_grid[i] < 2) throw InvalidArgument("n_grid entries must be >= 2");
    if (i > 0 && config.n_grid[i] <= config.n_grid[i - 1]) {
      throw InvalidArgument("n_grid must be strictly increasing");
    }
  }
  if (config.replications < 1) throw InvalidArgument("reps must be >= 1");
  if (!(config.alpha > 0.0) || !std::isfinite(config.alpha)) {
    throw InvalidArgument("alpha must be positive");
  }
  validate_noise(config.noise);
}

std::vector<double> replication_losses(const ExperimentConfig& config, std::size_t n) {
  validate_config(config);
  const Prepared p = prepare(config, n);
  std::vector<double> out(config.replications);
  parallel_for(config.replications, config.threads,
               [&](std::size_t r) { out[r] = loss(config, p, r); });
  return out;
}

RiskReport run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const std::size_t grid = config.n_grid.size();
  const std::size_t reps = config.replications;

  std::vector<Prepared> prepared;
  prepared.reserve(grid);
  for (std::size_t n : config.n_grid) prepared.push_back(prepare(config, n));

  std::vector<double> losses(grid * reps);
  parallel_for(grid * reps, config.threads, [&](std::size_t job) {
    losses[job] = loss(config, prepared[job / reps], job % reps);
  });

  const double sigma = config.noise.sigma;
  RiskReport report;
  for (std::size_t g = 0; g < grid; ++g) {
    const Prepared& p = prepared[g];
    const std::span<const double> l(losses.data() + g * reps, reps);
    RiskRow row;
    row.n = p.n;
    row.s1 = p.signal.s1;
    row.s2 = p.signal.s2;
    row.V = p.signal.V;

    double sum = 0.0;
    for (double x : l) sum += x;
    row.mse_mean = sum / static_cast<double>(reps);
    if (reps > 1) {
      double ss = 0.0;
      for (double x : l) ss += (x - row.mse_mean) * (x - row.mse_mean);
      row.mse_stderr = std::sqrt(ss / static_cast<double>(reps - 1) / static_cast<double>(reps));
    }

    row.minimax_term = minimax_dominant_term(p.n, p.signal.V, sigma);
    row.minimax_ratio = row.mse_mean / row.minimax_term;
    row.adaptive_rhs = adaptive_bound(p.n, p.signal.s1, p.signal.s2, sigma, config.alpha);
    const auto covered = std::count_if(l.begin(), l.end(), [&](double x) { return x <= row.adaptive_rhs; });
    row.coverage = static_cast<double>(covered) / static_cast<double>(reps);

    if (config.estimator == Estimator::unimodal) {
      row.oracle_rhs = unimodal_oracle_rhs(p.signal.theta, sigma);
    } else if (p.monotone) {
      row.oracle_rhs = oracle_rhs(p.signal.theta, sigma);
    }
    report.rows.push_back(row);
  }
  return report;
}

SlopeFit scaling_slope(std::span<const double> n, std::span<const double> mse) {
  if (n.size() != mse.size()) throw InvalidArgument("scaling_slope: length mismatch");
  if (n.size() < 3) throw InvalidArgument("scaling_slope: need at least 3 points");
  const std::size_t k = n.size();
  std::vector<double> x(k);
  std::vector<double> y(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(n[i] > 0.0) || !(mse[i] > 0.0)) {
      throw InvalidArgument("scaling_slope: n and mse must be positive (row " + std::to_string(i + 1) + ")");
    }
    x[i] = std::log(n[i]);
    y[i] = std::log(mse[i]);
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("scaling_slope: n values must not all be equal");
  SlopeFit fit;
  fit.points = k;
  fit.slope = sxy / sxx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = y[i] - my - fit.slope * (x[i] - mx);
    ssr += r * r;
  }
  fit.stderr_ = std::sqrt(ssr / static_cast<double>(k - 2) / sxx);
  return fit;
}

SlopeFit scaling_slope(const RiskReport& report) {
  std::vector<double> n;
  std::vector<double> mse;
  for (const RiskRow& row : report.rows) {
    n.push_back(static_cast<double>(row.n));
    mse.push_back(row.mse_mean);
  }
  return scaling_slope(n, mse);
}

}  // namespace unireg
