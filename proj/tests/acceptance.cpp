// Acceptance run: one PASS/FAIL line per criterion. Usage: acceptance [path to unireg]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>

#include "unireg/geometry.hpp"
#include "unireg/isotonic.hpp"
#include "unireg/kernels.hpp"
#include "unireg/oracle.hpp"
#include "unireg/risklab.hpp"
#include "unireg/unimodal.hpp"

using namespace unireg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

unsigned worker_count() { return std::max(1U, std::thread::hardware_concurrency()); }

Sequence random_input(SplitMix64& rng, std::size_t n) {
  Sequence y(n);
  fill_standard_normal(rng, y);
  if (rng() % 3 == 0) {
    for (double& v : y) v = std::round(2.0 * v);
  }
  return y;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Outcome oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  double worst_mono = 0.0;
  double worst_uni = 0.0;
  std::size_t mode_mismatch = 0;
  for (std::size_t n = 2; n <= 12; ++n) {
    SplitMix64 rng = make_stream(101, n, 0);
    for (int rep = 0; rep < 1000; ++rep) {
      const Sequence y = random_input(rng, n);
      for (Direction d : {Direction::nondecreasing, Direction::nonincreasing}) {
        worst_mono = std::max(worst_mono, max_abs_diff(pava(y, d).fitted, oracle::brute_monotone_projection(y, d)));
      }
    }
  }
  for (std::size_t n = 2; n <= 10; ++n) {
    SplitMix64 rng = make_stream(101, n, 1);
    for (int rep = 0; rep < 500; ++rep) {
      const Sequence y = random_input(rng, n);
      const UnimodalFit f = unimodal_lse(y);
      const oracle::UnimodalResult ref = oracle::brute_unimodal_projection(y);
      worst_uni = std::max(worst_uni, max_abs_diff(f.fitted, ref.fitted));
      if (f.mode != ref.mode) ++mode_mismatch;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Outcome o;
  o.pass = worst_mono <= 1e-9 && worst_uni <= 1e-9 && mode_mismatch == 0 && secs < 60.0;
  o.detail = "max diff pava " + fmt(worst_mono) + ", unimodal " + fmt(worst_uni) + ", mode mismatches " +
             std::to_string(mode_mismatch) + ", " + fmt(secs) + " s";
  return o;
}

Outcome kkt_invariants() {
  SplitMix64 rng = make_stream(102, 0, 0);
  std::size_t failures = 0;
  double worst_orth = 0.0;
  double worst_gen = 0.0;
  for (int rep = 0; rep < 10000; ++rep) {
    const std::size_t n = 1 + rng() % 64;
    const Sequence y = random_input(rng, n);
    const Sequence f = pava(y, Direction::nondecreasing).fitted;
    double yy = 0.0;
    double orth = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      yy += y[i] * y[i];
      orth += (y[i] - f[i]) * f[i];
    }
    const double ynorm = std::sqrt(yy);
    const double orth_rel = std::abs(orth) / std::max(yy, 1e-300);
    worst_orth = std::max(worst_orth, yy > 0 ? orth_rel : 0.0);
    bool ok = std::abs(orth) <= 1e-9 * yy + 1e-15;
    double tail = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += y[i] - f[i];
    double gen = std::abs(total);
    for (std::size_t k = n; k >= 2; --k) {
      tail += y[k - 1] - f[k - 1];
      gen = std::max(gen, tail);
    }
    worst_gen = std::max(worst_gen, ynorm > 0 ? gen / ynorm : 0.0);
    ok = ok && gen <= 1e-9 * ynorm + 1e-15;
    if (!ok) ++failures;
  }
  return {failures == 0, "10000 instances, failures " + std::to_string(failures) + ", worst relative orthogonality " +
                             fmt(worst_orth) + ", worst generator value " + fmt(worst_gen)};
}

Outcome slicing_identity() {
  std::size_t failures = 0;
  double worst = 0.0;
  for (std::size_t inst = 0; inst < 50; ++inst) {
    const std::size_t n = 1 + inst % 6;
    SplitMix64 rng = make_stream(103, n, inst);
    const Sequence theta = random_unimodal(n, rng);
    Sequence z(n);
    fill_standard_normal(rng, z);
    Sequence y(n);
    double zz = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = theta[i] + z[i];
      zz += z[i] * z[i];
    }
    const SlicingReport r = slicing_check(y, theta, linear_grid(0.0, 2.0 * std::sqrt(zz) + 1.0, 200));
    const double tol = 1e-3 * (1.0 + zz);
    worst = std::max(worst, r.identity_gap / tol);
    if (r.identity_gap > tol || !r.has_negative_tail || !r.termination_holds) ++failures;
  }
  return {failures == 0, "50 instances, failures " + std::to_string(failures) + ", worst gap/tolerance " + fmt(worst)};
}

Outcome minimax_rate() {
  ExperimentConfig c;
  for (std::size_t e = 7; e <= 13; ++e) c.n_grid.push_back(std::size_t{1} << e);
  c.replications = 200;
  c.seed = 20240601;
  c.signal = SmoothBumpSignal{1.0};
  c.noise = {NoiseKind::gaussian, 1.0};
  c.threads = worker_count();
  const RiskReport rep = run_experiment(c);
  const SlopeFit fit = scaling_slope(rep);
  double lo = INFINITY;
  double hi = 0.0;
  for (const RiskRow& r : rep.rows) {
    lo = std::min(lo, r.minimax_ratio);
    hi = std::max(hi, r.minimax_ratio);
  }
  const bool pass = fit.slope >= -0.80 && fit.slope <= -0.55 && hi / lo <= 3.0;
  return {pass, "slope " + fmt(fit.slope) + " (stderr " + fmt(fit.stderr_) + "), ratio max/min " + fmt(hi / lo)};
}

Outcome adaptive_coverage(NoiseKind kind) {
  ExperimentConfig c;
  c.n_grid = {512};
  c.replications = 400;
  c.seed = 777;
  c.alpha = 1.0;
  c.signal = PiecewiseConstantSignal{{1.0 / 3.0, 2.0 / 3.0}, {0.0, 1.0, 0.5}};
  c.noise = {kind, 1.0};
  c.threads = worker_count();
  const RiskRow row = run_experiment(c).rows.at(0);
  const double p0 = 1.0 - 4.0 / 512.0;
  const double se = std::sqrt(p0 * (1.0 - p0) / 400.0);
  const bool coverage_ok = row.s1 + row.s2 == 4 && row.coverage >= p0 - 3.0 * se;

  ExperimentConfig scan = c;
  scan.n_grid = {256, 512, 1024, 2048, 4096};
  scan.replications = 200;
  double lo = INFINITY;
  double hi = 0.0;
  for (const RiskRow& r : run_experiment(scan).rows) {
    const double v = r.mse_mean * static_cast<double>(r.n) / std::log(static_cast<double>(r.n));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const bool scaling_ok = hi / lo <= 3.0;
  return {coverage_ok && scaling_ok, std::string(to_string(kind)) + ": s1+s2 " + std::to_string(row.s1 + row.s2) +
                                         ", coverage " + fmt(row.coverage) + " vs threshold " +
                                         fmt(p0 - 3.0 * se) + ", mse*n/log n spread " + fmt(hi / lo)};
}

Outcome bounded_noise_parity() {
  const Outcome u = adaptive_coverage(NoiseKind::uniform_bounded);
  const Outcome r = adaptive_coverage(NoiseKind::rademacher);
  return {u.pass && r.pass, u.detail + "; " + r.detail};
}

double two_dim_integral() {
  // E||Pi z||^2 for the cone {a <= b} by polar quadrature.
  double integral = 0.0;
  const int radial = 4000;
  const int angular = 720;
  const double rmax = 10.0;
  for (int i = 0; i < radial; ++i) {
    const double r = (i + 0.5) * rmax / radial;
    for (int j = 0; j < angular; ++j) {
      const double phi = (j + 0.5) * 2 * std::numbers::pi / angular;
      const double a = r * std::cos(phi);
      const double b = r * std::sin(phi);
      const double proj = a <= b ? a * a + b * b : 0.5 * (a + b) * (a + b);
      integral += proj * std::exp(-0.5 * r * r) / (2 * std::numbers::pi) * r * (rmax / radial) *
                  (2 * std::numbers::pi / angular);
    }
  }
  return integral;
}

Outcome statistical_dimension() {
  const auto start = std::chrono::steady_clock::now();
  const StatDimOptions opts{.pointwise_subsample = 100, .threads = worker_count()};
  const double reference = two_dim_integral();
  const StatDimEstimate two = statistical_dimension_mc(2, 100000, 104, opts);
  bool pass = std::abs(two.estimate - reference) <= 3.0 * two.std_err && two.pointwise_max_error <= 1e-6;
  std::string detail = "n=2 estimate " + fmt(two.estimate) + " vs " + fmt(reference) + " (se " + fmt(two.std_err) + ")";
  double pointwise = two.pointwise_max_error;
  for (std::size_t n : {8, 64, 512}) {
    const StatDimEstimate e = statistical_dimension_mc(n, 20000, 104, opts);
    pass = pass && e.estimate <= e.log_en_bound + 3.0 * e.std_err && e.pointwise_max_error <= 1e-6;
    pointwise = std::max(pointwise, e.pointwise_max_error);
    detail += "; n=" + std::to_string(n) + " " + fmt(e.estimate) + " <= " + fmt(e.log_en_bound);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  pass = pass && secs < 120.0;
  return {pass, detail + "; pointwise max error " + fmt(pointwise) + ", " + fmt(secs) + " s"};
}

Outcome geometric_properties() {
  const Sequence theta{0.0, 0.8, 1.5, 1.5, 0.7, -0.4};
  const double t = 1.5;
  const LipschitzReport lr = lipschitz_check(theta, t, Region::unimodal(), 200, 105);
  const bool lip_ok = lr.max_ratio <= t * (1.0 + 1e-6);

  double worst_concavity = 0.0;
  bool concave_ok = true;
  for (std::size_t curve = 0; curve < 20; ++curve) {
    SplitMix64 rng = make_stream(105, 4, curve);
    const Sequence th = random_unimodal(4, rng);
    Sequence z(4);
    fill_standard_normal(rng, z);
    const std::size_t m = 1 + curve % 4;
    const double d = distance_to_mode_cone(th, m);
    const double v = concavity_check(z, th, m, linear_grid(d, d + 4.0, 50));
    double zn = 0.0;
    for (double x : z) zn += x * x;
    zn = std::sqrt(zn);
    worst_concavity = std::max(worst_concavity, v / (1.0 + zn));
    concave_ok = concave_ok && v <= 1e-6 * (1.0 + zn);
  }

  const SubGaussianMaxReport sg = subgaussian_max_check(theta, 1.0, 100, 200, 400, 106, worker_count());
  const bool subg_ok = sg.exceed_fraction <= 0.05;
  return {lip_ok && concave_ok && subg_ok,
          "Lipschitz ratio " + fmt(lr.max_ratio) + " (t " + fmt(t) + "), concavity violation/(1+|z|) " +
              fmt(worst_concavity) + ", sub-Gaussian exceedances " + fmt(sg.exceed_fraction)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome determinism(const std::string& tool) {
  if (tool.empty()) return {false, "path to the unireg executable not given"};
  const fs::path dir = fs::temp_directory_path() / "unireg_acceptance";
  fs::create_directories(dir);
  const fs::path cfg = dir / "determinism.cfg";
  {
    std::ofstream f(cfg);
    f << "n_grid = 64, 256, 1024\nreps = 50\nseed = 99\nsignal.kind = piecewise_constant\n"
         "signal.breakpoints = 0.25, 0.6\nsignal.levels = 0, 2, 1\nnoise.kind = rademacher\nnoise.sigma = 0.5\n";
  }
  auto run = [&](const std::string& threads, const std::string& name) {
    const fs::path out = dir / name;
    const std::string cmd = "\"" + tool + "\" --threads " + threads + " simulate \"" + cfg.string() +
                            "\" --output \"" + out.string() + "\"";
    if (std::system(cmd.c_str()) != 0) return std::string("<command failed>");
    return slurp(out);
  };
  const std::string a = run("1", "t1_a.csv");
  const std::string b = run("1", "t1_b.csv");
  const std::string c = run("8", "t8.csv");
  const bool pass = a.find("<command failed>") == std::string::npos && !a.empty() && a == b && a == c;
  return {pass, "repeat identical " + std::string(a == b ? "yes" : "no") + ", threads 1 vs 8 identical " +
                    (a == c ? "yes" : "no") + ", " + std::to_string(a.size()) + " bytes"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string tool = argc > 1 ? argv[1] : "";
  std::printf("kernel backend: %s, threads: %u\n", std::string(kernels::to_string(kernels::active())).c_str(),
              worker_count());
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle equivalence", oracle_equivalence},
      {"KKT invariants", kkt_invariants},
      {"slicing identity", slicing_identity},
      {"minimax rate", minimax_rate},
      {"adaptive coverage", [] { return adaptive_coverage(NoiseKind::gaussian); }},
      {"bounded-noise parity", bounded_noise_parity},
      {"statistical dimension", statistical_dimension},
      {"geometric property suite", geometric_properties},
      {"determinism", [&] { return determinism(tool); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
