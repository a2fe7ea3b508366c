#pragma once

// Numerical bench for the variational identities behind the unimodal LSE:
// projections onto intersections of convex sets, localized suprema of
// <z, theta - theta*> over mode cones intersected with balls, and the checks
// built on top of them. The noise level is fixed to sigma = 1 here; every
// identity is homogeneous in sigma.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include "unireg/sequence.hpp"

namespace unireg {

// ---------------------------------------------------------------------------
// Convex sets with exact projectors
// ---------------------------------------------------------------------------

/// Monotone constraint on the 0-based index range [begin, end); coordinates
/// outside the range are unconstrained.
struct MonotoneConeSet {
  Direction direction = Direction::nondecreasing;
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct BallSet {
  Sequence center;
  double radius = 0.0;
};

/// The mode cone C_m, m 1-based.
struct ModeConeSet {
  std::size_t mode = 1;
};

using ConvexSet = std::variant<MonotoneConeSet, BallSet, ModeConeSet>;

/// Validates `set` for sequences of length n; throws InvalidArgument.
void validate_set(const ConvexSet& set, std::size_t n);

/// Exact Euclidean projection of `in` onto `set`, written to `out`.
void project_onto(const ConvexSet& set, std::span<const double> in, std::span<double> out);

struct DykstraOptions {
  double tol = 1e-10;
  std::size_t max_iter = 100000;
};

/// Projection onto the intersection of `sets` by Dykstra's algorithm with one
/// correction term per set. Stops when a full cycle moves the iterate and the
/// correction terms by less than tol. Throws InfeasibleError when the
/// iterates settle while the corrections keep drifting by a constant step
/// (the signature of an empty intersection), ConvergenceError otherwise.
Sequence dykstra_project(std::span<const double> y, std::span<const ConvexSet> sets,
                         const DykstraOptions& options = {});

// ---------------------------------------------------------------------------
// Localized suprema
// ---------------------------------------------------------------------------

/// Either the union of all mode cones (the unimodal sequences) or one C_m.
struct Region {
  enum class Kind { unimodal, mode_cone };
  Kind kind = Kind::unimodal;
  std::size_t mode = 0;  // 1-based, mode_cone only

  static Region unimodal() { return {Kind::unimodal, 0}; }
  static Region mode_cone(std::size_t m) { return {Kind::mode_cone, m}; }
};

struct SupOptions {
  // Stop once upper - lower <= rel_tol * (1 + t * ||z||).
  double rel_tol = 1e-12;
  std::size_t max_iter = 400;
};

/// Two-sided certificate for sup { <z, theta - theta*> : theta in region,
/// ||theta - theta*|| <= t }. `lower` is attained by `argmax` (a feasible
/// point); `upper` comes from Lagrangian duality. Both are -inf when no
/// point of the region lies within t of theta*.
struct SupCertificate {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = -std::numeric_limits<double>::infinity();
  Sequence argmax;
  std::size_t best_mode = 0;  // slice attaining `lower` (1-based), 0 if infeasible

  bool feasible() const noexcept { return best_mode != 0; }
};

/// Per slice C_m the maximizer is theta(mu) = Pi_{C_m}(theta* + mu z) for the
/// multiplier mu at which ||theta(mu) - theta*|| = t; mu is found by bisection
/// and every trial point yields a dual upper bound, so the returned interval
/// is certified. Slices whose distance to theta* exceeds t are skipped.
SupCertificate localized_sup_certified(std::span<const double> z,
                                       std::span<const double> theta_star, double t,
                                       Region region, const SupOptions& options = {});

/// Lower end of localized_sup_certified.
double localized_sup(std::span<const double> z, std::span<const double> theta_star, double t,
                     Region region, const SupOptions& options = {});

/// Independent slow route for one slice C_m: fixed-step projected gradient
/// ascent on the linear objective, step t / (||z|| + eps), each step
/// projected onto C_m intersected with the ball by dykstra_project. Returns
/// the objective at the final (feasible) iterate.
double localized_sup_projected_gradient(std::span<const double> z,
                                        std::span<const double> theta_star, double t,
                                        std::size_t mode, std::size_t iterations = 500,
                                        const DykstraOptions& dykstra = {});

/// Distance from theta* to C_m.
double distance_to_mode_cone(std::span<const double> theta_star, std::size_t mode);

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

struct SlicingReport {
  double achieved_radius = 0.0;  // ||theta_hat - theta*||
  double f_at_achieved = 0.0;
  double max_f_on_grid = 0.0;
  std::vector<double> grid;
  std::vector<double> f_on_grid;
  // max(0, max_f_on_grid - f_at_achieved)
  double identity_gap = 0.0;
  // max_f_on_grid - f_at_achieved without clamping; <= 0 when the achieved
  // radius maximizes f.
  double signed_gap = 0.0;
  // f at the achieved radius minus the value realised by theta_hat itself;
  // zero when theta_hat attains the supremum at its own radius.
  double attainment_gap = 0.0;
  // Smallest grid radius t* with f < 0 on every grid point >= t*, if any.
  bool has_negative_tail = false;
  double negative_tail_start = 0.0;
  double grid_spacing = 0.0;
  bool termination_holds = true;  // achieved_radius < t* + grid_spacing
};

/// Evaluates f(t) = localized_sup(z, theta*, t, unimodal) - t^2/2 with
/// z = y - theta* on `grid` and at t = ||unimodal_lse(y) - theta*||.
/// theta* must be unimodal.
SlicingReport slicing_check(std::span<const double> y, std::span<const double> theta_star,
                            std::span<const double> grid, const SupOptions& options = {});

struct StatDimEstimate {
  double estimate = 0.0;  // mean of ||Pi_M z||^2
  double std_err = 0.0;
  double log_en_bound = 0.0;  // log(e n)
  std::size_t replications = 0;
  // max |  ||Pi_M z|| - sup_{theta in M, ||theta|| <= 1} <z, theta>  | over the
  // subsampled draws
  double pointwise_max_error = 0.0;
  std::size_t pointwise_checked = 0;
};

struct StatDimOptions {
  std::size_t pointwise_subsample = 100;
  unsigned threads = 1;
};

/// Monte Carlo statistical dimension of the nondecreasing cone in R^n.
StatDimEstimate statistical_dimension_mc(std::size_t n, std::size_t replications,
                                         std::uint64_t seed, const StatDimOptions& options = {});

struct LipschitzReport {
  double max_ratio = 0.0;
  std::size_t pairs = 0;
};

/// Max over sampled pairs of |f(z) - f(z')| / ||z - z'|| with
/// f(z) = localized_sup(z, theta*, t, region).
LipschitzReport lipschitz_check(std::span<const double> theta_star, double t, Region region,
                                std::size_t pairs, std::uint64_t seed);

/// Largest shortfall of g((t_{i-1} + t_{i+1}) / 2) below the chord
/// (g(t_{i-1}) + g(t_{i+1})) / 2 over consecutive triples, where
/// g(t) = localized_sup(z, theta*, t, C_m). Every radius must be at least
/// the distance from theta* to C_m.
double concavity_check(std::span<const double> z, std::span<const double> theta_star,
                       std::size_t mode, std::span<const double> grid);

struct SubGaussianMaxReport {
  double mean_estimate = 0.0;  // pilot estimate of E X
  double threshold = 0.0;      // mean + a (sqrt(2 log k) + sqrt(2 pi))
  std::size_t trials = 0;
  std::size_t exceedances = 0;
  double exceed_fraction = 0.0;
};

/// X = localized_sup(z, theta*, t, unimodal) is t-Lipschitz in standard
/// Gaussian z, hence sub-Gaussian with a = t. Draws `count` independent
/// copies per trial and counts trials whose maximum exceeds the threshold.
SubGaussianMaxReport subgaussian_max_check(std::span<const double> theta_star, double t,
                                           std::size_t count, std::size_t trials,
                                           std::size_t pilot, std::uint64_t seed,
                                           unsigned threads = 1);

struct WidthEstimate {
  std::vector<double> t_grid;
  std::vector<double> mean_sup;
  std::vector<double> std_err;
  std::vector<double> bound_curve;
  std::vector<double> ratio;  // mean_sup / bound_curve (0 where the bound is 0)
  double max_ratio = 0.0;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
};

enum class WidthBound { worst_case, piecewise_constant };

/// Local width bound with the universal constant set to 1 (sigma = 1):
///   worst_case:          n^{1/4} t^{1/2} sqrt(V + 1) + t sqrt(log n) + t^2 / 8
///   piecewise_constant:  2 t sqrt(s log(e n / s)) + 2 t sqrt(2 s (alpha + 2) log n)
double width_bound_worst_case(std::size_t n, double range, double t);
double width_bound_piecewise(std::size_t n, std::size_t pieces, double alpha, double t);

struct WidthOptions {
  WidthBound bound = WidthBound::worst_case;
  double alpha = 1.0;
  unsigned threads = 1;
};

/// Monte Carlo mean of the localized supremum over the unimodal sequences
/// around theta*, on a grid of radii, with common random numbers across the
/// grid so the mean is nondecreasing in t.
WidthEstimate localized_width_mc(std::span<const double> theta_star,
                                 std::span<const double> t_grid, std::size_t replications,
                                 std::uint64_t seed, const WidthOptions& options = {});

}  // namespace unireg
