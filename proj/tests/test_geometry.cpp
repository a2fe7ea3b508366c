#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>

#include "support.hpp"
#include "unireg/errors.hpp"
#include "unireg/geometry.hpp"
#include "unireg/isotonic.hpp"
#include "unireg/risklab.hpp"
#include "unireg/unimodal.hpp"

using namespace unireg;
using Catch::Matchers::WithinAbs;

namespace {

// Dense grid over the disk of radius r around c; returns the feasible point
// maximizing `score`.
std::array<double, 2> grid_argmax(std::array<double, 2> c, double r,
                                  const std::function<bool(double, double)>& feasible,
                                  const std::function<double(double, double)>& score,
                                  int steps = 1200) {
  std::array<double, 2> best{c[0], c[1]};
  double best_score = -INFINITY;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      const double a = c[0] - r + 2.0 * r * i / steps;
      const double b = c[1] - r + 2.0 * r * j / steps;
      if ((a - c[0]) * (a - c[0]) + (b - c[1]) * (b - c[1]) > r * r) continue;
      if (!feasible(a, b)) continue;
      const double s = score(a, b);
      if (s > best_score) {
        best_score = s;
        best = {a, b};
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("dykstra examples") {
  const Sequence y{0.3, -1.2, 2.0};
  const std::vector<ConvexSet> own_ball{BallSet{y, 1.0}};
  CHECK(dykstra_project(y, own_ball) == y);

  const std::vector<ConvexSet> cone{MonotoneConeSet{Direction::nondecreasing, 0, 3}};
  CHECK(test::max_abs_diff(dykstra_project(y, cone), pava(y, Direction::nondecreasing).fitted) <= 1e-10);

  const std::vector<ConvexSet> both{MonotoneConeSet{Direction::nondecreasing, 0, 2}, BallSet{{0, 0}, 1.0}};
  const Sequence p = dykstra_project(Sequence{2, 0}, both);
  CHECK_THAT(p[0], WithinAbs(1.0 / std::sqrt(2.0), 1e-8));
  CHECK_THAT(p[1], WithinAbs(1.0 / std::sqrt(2.0), 1e-8));
  const auto g = grid_argmax({0, 0}, 1.0, [](double a, double b) { return a <= b; },
                             [](double a, double b) { return -((a - 2) * (a - 2) + b * b); });
  CHECK_THAT(p[0], WithinAbs(g[0], 4e-3));
  CHECK_THAT(p[1], WithinAbs(g[1], 4e-3));
}

TEST_CASE("dykstra nested sets and errors") {
  SplitMix64 rng(31);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + rng() % 8;
    const Sequence y = test::random_input(rng, n);
    const std::size_t m = 1 + rng() % n;
    // C_m is contained in the rising half-cone on 1..m.
    const std::vector<ConvexSet> nested{MonotoneConeSet{Direction::nondecreasing, 0, m}, ModeConeSet{m}};
    CHECK(test::max_abs_diff(dykstra_project(y, nested), mode_cone_projection(y, m)) <= 1e-8);
  }
  const std::vector<ConvexSet> disjoint{BallSet{{0, 0}, 1.0}, BallSet{{5, 0}, 1.0}};
  CHECK_THROWS_AS(dykstra_project(Sequence{1, 1}, disjoint), InfeasibleError);
  const std::vector<ConvexSet> bad_range{MonotoneConeSet{Direction::nondecreasing, 0, 5}};
  CHECK_THROWS_AS(dykstra_project(Sequence{1, 1}, bad_range), InvalidArgument);
  const std::vector<ConvexSet> bad_ball{BallSet{{0, 0}, -1.0}};
  CHECK_THROWS_AS(dykstra_project(Sequence{1, 1}, bad_ball), InvalidArgument);
}

TEST_CASE("localized_sup examples") {
  SplitMix64 rng(32);
  const Sequence z = test::random_input(rng, 5);
  const Sequence theta{0, 1, 2, 1, 0};
  CHECK(localized_sup(z, theta, 0.0, Region::unimodal()) == 0.0);
  CHECK(localized_sup(z, theta, 0.0, Region::mode_cone(3)) == 0.0);
  CHECK_THROWS_AS(localized_sup(z, theta, -1.0, Region::unimodal()), InvalidArgument);
  CHECK_THROWS_AS(localized_sup(z, Sequence{0, 1}, 1.0, Region::unimodal()), InvalidArgument);

  CHECK_THAT(localized_sup(Sequence{1, -1}, Sequence{0, 0}, 1.0, Region::mode_cone(2)), WithinAbs(0.0, 1e-12));
  const auto g = grid_argmax({0, 0}, 1.0, [](double a, double b) { return a <= b; },
                             [](double a, double b) { return a - b; });
  CHECK_THAT(g[0] - g[1], WithinAbs(0.0, 1e-12));

  // Nondecreasing z already lies in M, so the sup is ||z||.
  const Sequence up{-1, 0.5, 0.5, 2};
  CHECK_THAT(localized_sup(up, Sequence(4, 0.0), 1.0, Region::mode_cone(4)), WithinAbs(test::norm(up), 1e-10));
}

TEST_CASE("localized_sup against a dense 2-D grid") {
  SplitMix64 rng(33);
  for (int rep = 0; rep < 20; ++rep) {
    Sequence z(2);
    fill_standard_normal(rng, z);
    const Sequence theta = random_unimodal(2, rng);
    const double t = 0.2 + 2.0 * static_cast<double>(rng() % 1000) / 1000.0;
    for (std::size_t m = 1; m <= 2; ++m) {
      auto feasible = [m](double a, double b) { return m == 1 ? a >= b : a <= b; };
      auto score = [&](double a, double b) { return z[0] * (a - theta[0]) + z[1] * (b - theta[1]); };
      // Empty slice: theta is farther than t from the cone.
      if (std::abs(theta[0] - theta[1]) / std::sqrt(2.0) > t && !feasible(theta[0], theta[1])) {
        CHECK(localized_sup(z, theta, t, Region::mode_cone(m)) == -INFINITY);
        continue;
      }
      const auto g = grid_argmax({theta[0], theta[1]}, t, feasible, score, 800);
      const double grid_value = score(g[0], g[1]);
      const double exact = localized_sup(z, theta, t, Region::mode_cone(m));
      CHECK(exact >= grid_value - 1e-9);
      CHECK(exact <= grid_value + 2e-2 * t * test::norm(z));
    }
    // U_2 is all of R^2.
    CHECK_THAT(localized_sup(z, theta, t, Region::unimodal()), WithinAbs(t * test::norm(z), 1e-10 * (1 + t)));
  }
}

TEST_CASE("localized_sup certificate, monotonicity and sublinearity") {
  SplitMix64 rng(34);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rng() % 12;
    Sequence z(n);
    fill_standard_normal(rng, z);
    const Sequence theta = random_unimodal(n, rng);
    double previous = 0.0;
    for (double t : {0.1, 0.5, 1.0, 2.0, 4.0}) {
      const SupCertificate c = localized_sup_certified(z, theta, t, Region::unimodal());
      REQUIRE(c.feasible());
      CHECK(c.upper - c.lower <= 1e-12 * (1.0 + t * test::norm(z)) * 1.0001);
      CHECK(std::sqrt(test::sq_dist(c.argmax, theta)) <= t * (1 + 1e-12) + 1e-12);
      CHECK(in_mode_cone(c.argmax, c.best_mode, 1e-12));
      CHECK(c.lower <= t * test::norm(z) + 1e-12);
      CHECK(c.lower >= previous - 1e-12);
      previous = c.lower;
    }
  }
}

TEST_CASE("localized_sup: certified route agrees with projected gradient") {
  SplitMix64 rng(35);
  for (int rep = 0; rep < 15; ++rep) {
    const std::size_t n = 2 + rng() % 4;
    Sequence z(n);
    fill_standard_normal(rng, z);
    const Sequence theta = random_unimodal(n, rng);
    const std::size_t m = smallest_mode(theta);
    const double t = 1.0;
    const double exact = localized_sup(z, theta, t, Region::mode_cone(m));
    const double pg = localized_sup_projected_gradient(z, theta, t, m, 300);
    CHECK(pg <= exact + 1e-6);
    CHECK(pg >= exact - 1e-3 * (1.0 + test::norm(z)));
  }
}

TEST_CASE("slicing identity") {
  SECTION("zero noise") {
    const Sequence theta{0, 1, 3, 2};
    const SlicingReport r = slicing_check(theta, theta, linear_grid(0, 2, 50));
    CHECK(r.achieved_radius == 0.0);
    CHECK(r.identity_gap == 0.0);
    for (std::size_t i = 0; i < r.grid.size(); ++i) CHECK_THAT(r.f_on_grid[i], WithinAbs(-0.5 * r.grid[i] * r.grid[i], 1e-12));
    CHECK(r.termination_holds);
  }
  SECTION("n = 1 closed form") {
    const SlicingReport r = slicing_check(Sequence{0.7}, Sequence{0.0}, linear_grid(0, 1.4, 141));
    CHECK_THAT(r.achieved_radius, WithinAbs(0.7, 1e-15));
    CHECK_THAT(r.f_at_achieved, WithinAbs(0.5 * 0.49, 1e-12));
    CHECK(r.identity_gap <= 1e-12);
  }
  SECTION("random instances") {
    SplitMix64 rng(36);
    for (int rep = 0; rep < 10; ++rep) {
      const std::size_t n = 1 + rng() % 6;
      const Sequence theta = random_unimodal(n, rng);
      Sequence y(n);
      fill_standard_normal(rng, y);
      Sequence z(n);
      for (std::size_t i = 0; i < n; ++i) {
        z[i] = y[i];
        y[i] += theta[i];
      }
      const double zn = test::norm(z);
      const SlicingReport r = slicing_check(y, theta, linear_grid(0, 2 * zn + 1, 200));
      CHECK(r.identity_gap <= 1e-3 * (1 + zn * zn));
      CHECK(std::abs(r.attainment_gap) <= 1e-9 * (1 + zn * zn));
      CHECK(r.has_negative_tail);
      CHECK(r.termination_holds);
    }
  }
  CHECK_THROWS_AS(slicing_check(Sequence{1, 2, 3}, Sequence{0, 1, 0.5, 2}, linear_grid(0, 1, 3)), InvalidArgument);
  CHECK_THROWS_AS(slicing_check(Sequence{1, 2, 3}, Sequence{1, 0, 1}, linear_grid(0, 1, 3)), InvalidArgument);
}

TEST_CASE("statistical dimension") {
  SECTION("n = 1") {
    const StatDimEstimate e = statistical_dimension_mc(1, 20000, 7);
    CHECK(std::abs(e.estimate - 1.0) <= 3 * e.std_err);
  }
  SECTION("n = 2 against 2-D integration") {
    // E||Pi z||^2 over a polar grid with the closed-form projection onto {a <= b}.
    double integral = 0.0;
    const int radial = 4000;
    const int angular = 720;
    const double rmax = 10.0;
    for (int i = 0; i < radial; ++i) {
      const double r = (i + 0.5) * rmax / radial;
      for (int j = 0; j < angular; ++j) {
        const double phi = (j + 0.5) * 2 * M_PI / angular;
        const double a = r * std::cos(phi);
        const double b = r * std::sin(phi);
        const double proj = a <= b ? a * a + b * b : 0.5 * (a + b) * (a + b);
        integral += proj * std::exp(-0.5 * r * r) / (2 * M_PI) * r * (rmax / radial) * (2 * M_PI / angular);
      }
    }
    CHECK_THAT(integral, WithinAbs(1.5, 1e-6));
    const StatDimEstimate e = statistical_dimension_mc(2, 40000, 8, {.pointwise_subsample = 50, .threads = 4});
    CHECK(std::abs(e.estimate - integral) <= 3 * e.std_err);
    CHECK(e.pointwise_max_error <= 1e-6);
    CHECK(e.pointwise_checked == 50);
  }
  SECTION("log(en) bound and thread independence") {
    const StatDimEstimate a = statistical_dimension_mc(64, 2000, 9, {.pointwise_subsample = 20, .threads = 1});
    const StatDimEstimate b = statistical_dimension_mc(64, 2000, 9, {.pointwise_subsample = 20, .threads = 6});
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_err == b.std_err);
    CHECK(a.estimate <= a.log_en_bound + 3 * a.std_err);
    CHECK_THAT(a.log_en_bound, WithinAbs(1 + std::log(64.0), 1e-15));
  }
  CHECK_THROWS_AS(statistical_dimension_mc(0, 10, 1), InvalidArgument);
  CHECK_THROWS_AS(statistical_dimension_mc(3, 1, 1), InvalidArgument);
}

TEST_CASE("Lipschitz, concavity and sub-Gaussian maxima") {
  const Sequence theta5{0, 1, 1.5, 1, -1};
  CHECK(lipschitz_check(theta5, 0.0, Region::unimodal(), 10, 1).max_ratio == 0.0);
  CHECK(lipschitz_check(Sequence{0.0}, 1.0, Region::unimodal(), 50, 2).max_ratio <= 1.0 + 1e-9);
  const LipschitzReport lr = lipschitz_check(theta5, 2.0, Region::unimodal(), 200, 3);
  CHECK(lr.max_ratio <= 2.0 * (1 + 1e-6));
  CHECK(lr.max_ratio > 0.5);

  CHECK(concavity_check(Sequence(4, 0.0), Sequence{0, 1, 0, -1}, 2, linear_grid(0, 3, 20)) == 0.0);
  CHECK(concavity_check(Sequence{0.4}, Sequence{0.0}, 1, linear_grid(0, 3, 20)) <= 1e-12);
  SplitMix64 rng(37);
  Sequence z(4);
  fill_standard_normal(rng, z);
  const Sequence theta4{0, 2, 1, 0.5};
  const double d = distance_to_mode_cone(theta4, 1);
  CHECK(d > 0.0);
  CHECK(concavity_check(z, theta4, 1, linear_grid(d, d + 3, 50)) <= 1e-6 * (1 + test::norm(z)));
  CHECK_THROWS_AS(concavity_check(z, theta4, 1, linear_grid(0, 1, 5)), InvalidArgument);

  const SubGaussianMaxReport sg = subgaussian_max_check(Sequence{0, 1, 2, 1, 0, -1}, 1.0, 100, 40, 200, 4, 4);
  CHECK(sg.trials == 40);
  CHECK(sg.exceed_fraction <= 0.05);
}

TEST_CASE("localized width Monte Carlo") {
  const GeneratedSignal g = generate_signal(SmoothBumpSignal{1.0}, 32);
  const std::vector<double> grid = linear_grid(0.5, 4, 8);
  const WidthEstimate a = localized_width_mc(g.theta, grid, 30, 5, {.threads = 1});
  const WidthEstimate b = localized_width_mc(g.theta, grid, 30, 5, {.threads = 5});
  CHECK(a.mean_sup == b.mean_sup);
  REQUIRE(a.mean_sup.size() == grid.size());
  CHECK(a.std_err.size() == grid.size());
  CHECK(a.bound_curve.size() == grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    CHECK(a.std_err[j] >= 0.0);
    if (j > 0) CHECK(a.mean_sup[j] >= a.mean_sup[j - 1] - 1e-12);
    CHECK_THAT(a.bound_curve[j], WithinAbs(width_bound_worst_case(32, 1.0, grid[j]), 1e-12));
  }
  CHECK_THAT(width_bound_piecewise(100, 2, 1.0, 1.0),
             WithinAbs(2 * std::sqrt(2 * std::log(50 * M_E)) + 2 * std::sqrt(12 * std::log(100.0)), 1e-12));
}
