#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "unireg/rng.hpp"
#include "unireg/sequence.hpp"

namespace unireg {

// Signal families. Positions are expressed as fractions of n so one signal
// covers a whole n grid; x_i = (i - 0.5) / n is the midpoint of cell i.

/// Piecewise constant with levels[k] on the k-th piece. Piece k ends at index
/// round(breakpoints[k] * n); breakpoints lie in (0, 1) and increase strictly.
/// Levels must rise then fall.
struct PiecewiseConstantSignal {
  std::vector<double> breakpoints;
  std::vector<double> levels;
};

/// sin(pi x_i), affinely rescaled to [0, V] and mirrored so it is exactly
/// symmetric. Needs n >= 3 when V > 0.
struct SmoothBumpSignal {
  double V = 1.0;
};

/// 1 on the centred interval of length `fraction`, 0 elsewhere.
struct IndicatorSignal {
  double fraction = 1.0 / 3.0;
};

/// `pieces` equal-length pieces at levels V * k / (pieces - 1).
struct StaircaseSignal {
  std::size_t pieces = 2;
  double V = 1.0;
};

struct ConstantSignal {
  double level = 0.0;
};

/// Explicit values; length must equal n.
struct CustomSignal {
  Sequence values;
};

using SignalSpec = std::variant<PiecewiseConstantSignal, SmoothBumpSignal, IndicatorSignal,
                                StaircaseSignal, ConstantSignal, CustomSignal>;

struct GeneratedSignal {
  Sequence theta;
  std::size_t mode = 1;  // smallest mode m* of theta (1-based)
  std::size_t s1 = 0;    // distinct values of theta_1..theta_{m*}
  std::size_t s2 = 0;    // distinct values of theta_{m*+1}..theta_n
  double V = 0.0;        // max - min
};

/// Throws InvalidArgument for inconsistent specs or when n is too small for
/// the requested shape.
GeneratedSignal generate_signal(const SignalSpec& spec, std::size_t n);

/// Random unimodal sequence with mode drawn uniformly from 1..n: rising
/// half-normal increments up to the mode, falling ones after it.
Sequence random_unimodal(std::size_t n, SplitMix64& rng);

/// Splits a unimodal theta at its smallest mode and counts distinct values on
/// each side.
GeneratedSignal describe_signal(std::span<const double> theta);

enum class NoiseKind { gaussian, uniform_bounded, rademacher };

std::string_view to_string(NoiseKind k) noexcept;

/// gaussian: N(0, sigma^2). uniform_bounded: uniform on [-sigma, sigma].
/// rademacher: +-sigma with equal probability.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::gaussian;
  double sigma = 1.0;
};

void validate_noise(const NoiseSpec& spec);

Sequence generate_noise(const NoiseSpec& spec, std::size_t n, SplitMix64& rng);

/// sigma^{4/3} (V + sigma)^{2/3} n^{-2/3}.
double minimax_dominant_term(std::size_t n, double V, double sigma);

/// C sigma^{4/3} (V + sigma)^{2/3} n^{-2/3} + (C + 24 alpha) sigma^2 log(n) / n.
double minimax_rate_bound(std::size_t n, double V, double sigma, double alpha, double C);

/// 12 sigma^2 (s/n) log(en/s) + 48 (alpha + 2) sigma^2 s log(n) / n with
/// s = s1 + s2. Requires 1 <= s <= n.
double adaptive_bound(std::size_t n, std::size_t s1, std::size_t s2, double sigma, double alpha);

/// Prefix sums of the mean-centred sequence, shared by the DP and the
/// exhaustive reference so both see the same arithmetic.
struct SegmentPrefix {
  std::vector<double> sum;     // size n + 1
  std::vector<double> sum_sq;  // size n + 1
  std::size_t size() const noexcept { return sum.size() - 1; }
  double cost(std::size_t j, std::size_t i) const;  // SSE of theta_{j+1..i}
};

SegmentPrefix segment_prefix(std::span<const double> theta);

/// err[k - 1] = minimal SSE of approximating theta by k constant pieces, for
/// k = 1..max_pieces. O(max_pieces * n^2).
std::vector<double> segment_error_curve(std::span<const double> theta, std::size_t max_pieces);

/// min over k of err(k)/n + sigma^2 (k/n) log(en/k), the infimum over monotone
/// approximants. Requires a monotone theta (either direction). The DP stops as
/// soon as the penalty alone exceeds the best value found.
double oracle_rhs(std::span<const double> theta, double sigma);

/// Per-half version for unimodal theta: splits at the smallest mode and
/// returns (m* O(left) + (n - m*) O(right)) / n.
double unimodal_oracle_rhs(std::span<const double> theta, double sigma);

enum class Estimator { unimodal, isotonic };

std::string_view to_string(Estimator e) noexcept;

struct ExperimentConfig {
  std::vector<std::size_t> n_grid;
  std::size_t replications = 100;
  std::uint64_t seed = 0;
  SignalSpec signal = SmoothBumpSignal{};
  NoiseSpec noise;
  double alpha = 1.0;
  Estimator estimator = Estimator::unimodal;
  unsigned threads = 1;  // speed only, never results
};

void validate_config(const ExperimentConfig& config);

struct RiskRow {
  std::size_t n = 0;
  double mse_mean = 0.0;
  double mse_stderr = 0.0;
  double minimax_term = 0.0;   // minimax_dominant_term(n, V, sigma)
  double minimax_ratio = 0.0;  // mse_mean / minimax_term
  double adaptive_rhs = 0.0;
  double coverage = 0.0;  // fraction of replications with loss <= adaptive_rhs
  std::optional<double> oracle_rhs;
  std::size_t s1 = 0;
  std::size_t s2 = 0;
  double V = 0.0;
};

struct RiskReport {
  std::vector<RiskRow> rows;
};

/// For each n: theta* from the signal spec, then `replications` draws of
/// y = theta* + noise from stream (seed, n, rep), each fitted and scored by
/// ||fit - theta*||^2 / n. Bit-identical for any thread count.
RiskReport run_experiment(const ExperimentConfig& config);

/// Per-replication losses for a single n, in replication order.
std::vector<double> replication_losses(const ExperimentConfig& config, std::size_t n);

struct SlopeFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  std::size_t points = 0;
};

/// OLS slope of log(mse) on log(n) with its standard error. Needs at least 3
/// points and positive mse values.
SlopeFit scaling_slope(std::span<const double> n, std::span<const double> mse);
SlopeFit scaling_slope(const RiskReport& report);

}  // namespace unireg
