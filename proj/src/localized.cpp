#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "unireg/errors.hpp"
#include "unireg/geometry.hpp"
#include "unireg/kernels.hpp"
#include "unireg/unimodal.hpp"

namespace unireg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SliceResult {
  double lower = -kInf;
  double upper = -kInf;
  Sequence argmax;
};

// Evaluates theta(mu) = Pi_{C_m}(theta* + mu z), its distance to theta* and
// the linear objective <z, theta(mu) - theta*>.
struct RayProbe {
  std::span<const double> z;
  std::span<const double> theta_star;
  std::size_t mode;
  Sequence point;
  Sequence shifted;
  Sequence offset;

  struct Sample {
    double radius;
    double objective;
  };

  Sample at(double mu) {
    kernels::axpy(shifted, theta_star, mu, z);
    point = mode_cone_projection(shifted, mode);
    for (std::size_t i = 0; i < point.size(); ++i) offset[i] = point[i] - theta_star[i];
    return {std::sqrt(kernels::squared_norm(offset)), kernels::dot(z, offset)};
  }
};

SliceResult slice_sup(std::span<const double> z, std::span<const double> theta_star, double t,
                      std::size_t mode, const SupOptions& options) {
  SliceResult out;
  RayProbe probe{z, theta_star, mode, {}, Sequence(z.size()), Sequence(z.size())};

  const RayProbe::Sample base = probe.at(0.0);
  const double scale = 1.0 + std::sqrt(kernels::squared_norm(theta_star));
  const double feas_slack = 1e-12 * scale;
  if (base.radius > t + feas_slack) return out;  // C_m misses the ball

  out.lower = base.objective;
  out.argmax = probe.point;
  const double znorm = std::sqrt(kernels::squared_norm(z));
  const double target = options.rel_tol * (1.0 + t * znorm);
  if (znorm == 0.0 || t <= base.radius) {
    // The feasible set is {Pi(theta*)} or the objective is identically zero.
    out.upper = out.lower;
    return out;
  }

  auto record = [&](double mu, const RayProbe::Sample& s) {
    // Lagrangian dual bound with multiplier 1/mu, valid for any mu > 0.
    out.upper = std::min(out.upper == -kInf ? kInf : out.upper,
                         s.objective + (t * t - s.radius * s.radius) / (2.0 * mu));
    if (s.radius <= t && s.objective > out.lower) {
      out.lower = s.objective;
      out.argmax = probe.point;
    }
  };

  // Bracket the multiplier: r(mu) is nondecreasing in mu.
  double mu_lo = 0.0;
  double mu_hi = t / znorm;
  std::size_t iter = 0;
  for (;; ++iter) {
    if (iter >= options.max_iter) {
      throw ConvergenceError("localized_sup: could not bracket the ball constraint", out.argmax,
                             out.upper - out.lower);
    }
    const RayProbe::Sample s = probe.at(mu_hi);
    record(mu_hi, s);
    if (s.radius >= t) break;
    if (out.upper - out.lower <= target) return out;  // ball inactive in the limit
    mu_lo = mu_hi;
    mu_hi *= 4.0;
  }

  while (out.upper - out.lower > target) {
    if (++iter >= options.max_iter) {
      throw ConvergenceError("localized_sup: bisection stalled at gap " +
                                 std::to_string(out.upper - out.lower),
                             out.argmax, out.upper - out.lower);
    }
    const double mu = (mu_lo > 0.0 && mu_hi > 4.0 * mu_lo) ? std::sqrt(mu_lo * mu_hi)
                                                           : 0.5 * (mu_lo + mu_hi);
    if (!(mu > mu_lo && mu < mu_hi)) break;  // bracket exhausted at machine precision
    const RayProbe::Sample s = probe.at(mu);
    record(mu, s);
    if (s.radius <= t) {
      mu_lo = mu;
    } else {
      mu_hi = mu;
    }
  }
  return out;
}

void require_inputs(std::span<const double> z, std::span<const double> theta_star, double t) {
  require_sequence(z, "z");
  require_sequence(theta_star, "theta*");
  require_same_length(z, theta_star);
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw InvalidArgument("localized_sup: radius must be finite and nonnegative");
  }
}

}  // namespace

SupCertificate localized_sup_certified(std::span<const double> z,
                                       std::span<const double> theta_star, double t,
                                       Region region, const SupOptions& options) {
  require_inputs(z, theta_star, t);
  const std::size_t n = z.size();
  std::size_t first = 1;
  std::size_t last = n;
  if (region.kind == Region::Kind::mode_cone) {
    if (region.mode < 1 || region.mode > n) throw InvalidArgument("region mode out of range");
    first = last = region.mode;
  }
  SupCertificate cert;
  for (std::size_t m = first; m <= last; ++m) {
    SliceResult slice = slice_sup(z, theta_star, t, m, options);
    if (slice.lower == -kInf) continue;
    cert.upper = std::max(cert.upper, slice.upper);
    if (slice.lower > cert.lower) {
      cert.lower = slice.lower;
      cert.argmax = std::move(slice.argmax);
      cert.best_mode = m;
    }
  }
  return cert;
}

double localized_sup(std::span<const double> z, std::span<const double> theta_star, double t,
                     Region region, const SupOptions& options) {
  return localized_sup_certified(z, theta_star, t, region, options).lower;
}

double distance_to_mode_cone(std::span<const double> theta_star, std::size_t mode) {
  const Sequence p = mode_cone_projection(theta_star, mode);
  return kernels::distance(p, theta_star);
}

double localized_sup_projected_gradient(std::span<const double> z,
                                        std::span<const double> theta_star, double t,
                                        std::size_t mode, std::size_t iterations,
                                        const DykstraOptions& dykstra) {
  require_inputs(z, theta_star, t);
  if (mode < 1 || mode > z.size()) throw InvalidArgument("mode out of range");
  if (distance_to_mode_cone(theta_star, mode) > t) return -kInf;

  const std::vector<ConvexSet> sets{
      ModeConeSet{mode},
      BallSet{Sequence(theta_star.begin(), theta_star.end()), t},
  };
  Sequence theta = dykstra_project(theta_star, sets, dykstra);
  const double step = t / (std::sqrt(kernels::squared_norm(z)) + 1e-12);
  Sequence moved(z.size());
  for (std::size_t k = 0; k < iterations; ++k) {
    kernels::axpy(moved, theta, step, z);
    theta = dykstra_project(moved, sets, dykstra);
  }
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= theta_star[i];
  return kernels::dot(z, theta);
}

}  // namespace unireg
