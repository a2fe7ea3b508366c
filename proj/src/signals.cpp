#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "unireg/errors.hpp"
#include "unireg/risklab.hpp"

namespace unireg {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double midpoint(std::size_t i, std::size_t n) {
  return (static_cast<double>(i) + 0.5) / static_cast<double>(n);
}

Sequence piecewise(const PiecewiseConstantSignal& s, std::size_t n) {
  if (s.levels.empty()) throw InvalidArgument("piecewise signal: no levels");
  if (s.breakpoints.size() + 1 != s.levels.size()) {
    throw InvalidArgument("piecewise signal: need exactly one breakpoint fewer than levels");
  }
  require_sequence(s.levels, "piecewise levels");
  if (!is_unimodal(s.levels)) throw InvalidArgument("piecewise signal: levels must rise then fall");
  std::vector<std::size_t> ends;
  for (double b : s.breakpoints) {
    if (!(b > 0.0 && b < 1.0)) throw InvalidArgument("piecewise signal: breakpoints must lie in (0, 1)");
    const auto end = static_cast<std::size_t>(std::lround(b * static_cast<double>(n)));
    if (end == 0 || end >= n || (!ends.empty() && end <= ends.back())) {
      throw InvalidArgument("piecewise signal: " + std::to_string(s.levels.size()) +
                            " pieces do not fit in n = " + std::to_string(n));
    }
    ends.push_back(end);
  }
  ends.push_back(n);
  Sequence theta(n);
  std::size_t start = 0;
  for (std::size_t k = 0; k < ends.size(); ++k) {
    std::fill(theta.begin() + static_cast<std::ptrdiff_t>(start),
              theta.begin() + static_cast<std::ptrdiff_t>(ends[k]), s.levels[k]);
    start = ends[k];
  }
  return theta;
}

Sequence bump(const SmoothBumpSignal& s, std::size_t n) {
  if (!(s.V >= 0.0) || !std::isfinite(s.V)) throw InvalidArgument("smooth bump: V must be >= 0");
  Sequence theta(n, 0.0);
  if (s.V == 0.0) return theta;
  if (n < 3) throw InvalidArgument("smooth bump: n must be >= 3 for a positive range");
  Sequence raw(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    raw[i] = std::sin(std::numbers::pi * midpoint(i, n));
    raw[n - 1 - i] = raw[i];
  }
  const double lo = raw.front();
  const double hi = raw[(n - 1) / 2];
  for (std::size_t i = 0; i < n; ++i) theta[i] = s.V * ((raw[i] - lo) / (hi - lo));
  return theta;
}

Sequence indicator(const IndicatorSignal& s, std::size_t n) {
  if (!(s.fraction >= 0.0 && s.fraction <= 1.0)) {
    throw InvalidArgument("indicator: fraction must lie in [0, 1]");
  }
  const double lo = 0.5 * (1.0 - s.fraction);
  const double hi = 0.5 * (1.0 + s.fraction);
  Sequence theta(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = midpoint(i, n);
    theta[i] = (x >= lo && x <= hi) ? 1.0 : 0.0;
  }
  return theta;
}

Sequence staircase(const StaircaseSignal& s, std::size_t n) {
  if (s.pieces < 1 || s.pieces > n) {
    throw InvalidArgument("staircase: pieces must be in [1, n] (n = " + std::to_string(n) + ")");
  }
  if (!(s.V >= 0.0) || !std::isfinite(s.V)) throw InvalidArgument("staircase: V must be >= 0");
  if (s.pieces == 1 && s.V != 0.0) throw InvalidArgument("staircase: one piece cannot have range V > 0");
  Sequence theta(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = i * s.pieces / n;
    theta[i] = s.pieces == 1 ? 0.0
                             : s.V * static_cast<double>(k) / static_cast<double>(s.pieces - 1);
  }
  return theta;
}

}  // namespace

Sequence random_unimodal(std::size_t n, SplitMix64& rng) {
  if (n < 1) throw InvalidArgument("random_unimodal: n must be >= 1");
  const std::size_t mode = 1 + static_cast<std::size_t>(rng() % n);
  Sequence steps(n);
  fill_standard_normal(rng, steps);
  Sequence theta(n);
  theta[0] = steps[0];
  for (std::size_t i = 1; i < n; ++i) {
    theta[i] = theta[i - 1] + (i < mode ? std::abs(steps[i]) : -std::abs(steps[i]));
  }
  return theta;
}

GeneratedSignal describe_signal(std::span<const double> theta) {
  require_sequence(theta, "theta*");
  GeneratedSignal g;
  g.theta.assign(theta.begin(), theta.end());
  g.mode = smallest_mode(theta);
  g.s1 = distinct_count(theta.first(g.mode));
  g.s2 = distinct_count(theta.subspan(g.mode));
  g.V = range_of(theta);
  return g;
}

GeneratedSignal generate_signal(const SignalSpec& spec, std::size_t n) {
  if (n < 1) throw InvalidArgument("generate_signal: n must be >= 1");
  Sequence theta = std::visit(
      overloaded{
          [n](const PiecewiseConstantSignal& s) { return piecewise(s, n); },
          [n](const SmoothBumpSignal& s) { return bump(s, n); },
          [n](const IndicatorSignal& s) { return indicator(s, n); },
          [n](const StaircaseSignal& s) { return staircase(s, n); },
          [n](const ConstantSignal& s) {
            if (!std::isfinite(s.level)) throw InvalidArgument("constant: level must be finite");
            return Sequence(n, s.level);
          },
          [n](const CustomSignal& s) {
            if (s.values.size() != n) {
              throw InvalidArgument("custom signal has " + std::to_string(s.values.size()) +
                                    " values, expected " + std::to_string(n));
            }
            require_sequence(s.values, "custom signal");
            if (!is_unimodal(s.values)) throw InvalidArgument("custom signal is not unimodal");
            return s.values;
          },
      },
      spec);
  return describe_signal(theta);
}

std::string_view to_string(NoiseKind k) noexcept {
  switch (k) {
    case NoiseKind::gaussian:
      return "gaussian";
    case NoiseKind::uniform_bounded:
      return "uniform_bounded";
    case NoiseKind::rademacher:
      return "rademacher";
  }
  return "unknown";
}

void validate_noise(const NoiseSpec& spec) {
  if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) {
    throw InvalidArgument("noise sigma must be positive and finite");
  }
}

Sequence generate_noise(const NoiseSpec& spec, std::size_t n, SplitMix64& rng) {
  validate_noise(spec);
  Sequence z(n);
  switch (spec.kind) {
    case NoiseKind::gaussian: {
      fill_standard_normal(rng, z);
      for (double& v : z) v *= spec.sigma;
      break;
    }
    case NoiseKind::uniform_bounded: {
      std::uniform_real_distribution<double> u(-spec.sigma, spec.sigma);
      for (double& v : z) v = u(rng);
      break;
    }
    case NoiseKind::rademacher: {
      for (double& v : z) v = (rng() >> 63) != 0 ? spec.sigma : -spec.sigma;
      break;
    }
  }
  return z;
}

}  // namespace unireg
