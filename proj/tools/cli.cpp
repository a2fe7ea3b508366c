#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "format.hpp"
#include "input.hpp"
#include "unireg/errors.hpp"
#include "unireg/geometry.hpp"
#include "unireg/isotonic.hpp"
#include "unireg/kernels.hpp"
#include "unireg/oracle.hpp"
#include "unireg/risklab.hpp"
#include "unireg/unimodal.hpp"

#ifndef UNIREG_VERSION
#define UNIREG_VERSION "0.0.0"
#endif

namespace unireg::cli {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Raised when a result disagrees with its reference or a checked invariant
// misses its tolerance. The report has already been written.
class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string kernels = "auto";
  unsigned threads = std::max(1U, std::thread::hardware_concurrency());
  std::optional<std::uint64_t> seed;
};

struct Context {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  Globals globals;
  Clock::time_point start = Clock::now();
};

json manifest(const Context& ctx, const std::string& command, json config, std::uint64_t seed) {
  const double elapsed = std::chrono::duration<double>(Clock::now() - ctx.start).count();
  return {{"command", command},
          {"config", std::move(config)},
          {"seed", seed},
          {"version", UNIREG_VERSION},
          {"kernels", std::string(kernels::to_string(kernels::active()))},
          {"duration_seconds", elapsed}};
}

// Writes to a file, or to `fallback` when the path is empty or "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (to_file()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw InvalidArgument("cannot open '" + path + "' for writing");
    }
    stream_ = to_file() ? static_cast<std::ostream*>(&file_) : &fallback;
  }
  bool to_file() const { return !path_.empty() && path_ != "-"; }
  std::ostream& stream() { return *stream_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

void write_json(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

void write_sidecar(const Sink& sink, const json& m) {
  if (!sink.to_file()) return;
  std::ofstream f(sink.path() + ".manifest.json", std::ios::binary);
  if (!f) throw InvalidArgument("cannot write manifest next to '" + sink.path() + "'");
  write_json(f, m);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::uint64_t resolve_seed(const Context& ctx, Settings& s, std::uint64_t fallback) {
  const std::uint64_t from_settings = s.seed("seed", fallback);
  return ctx.globals.seed.value_or(from_settings);
}

// ---- fit -------------------------------------------------------------------

struct FitArgs {
  std::string input = "-";
  std::string direction;
  bool per_mode = false;
  bool oracle = false;
  std::string output;
  std::string summary;
};

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

int cmd_fit(Context& ctx, const FitArgs& a) {
  Sequence y;
  if (a.input == "-") {
    y = read_sequence(ctx.in);
  } else {
    std::ifstream f(a.input);
    if (!f) throw InvalidArgument("cannot open '" + a.input + "'");
    y = read_sequence(f);
  }
  const std::size_t n = y.size();
  json summary{{"n", n}};
  json config{{"input", a.input}, {"per_mode_sse", a.per_mode}, {"oracle", a.oracle}};
  Sequence fitted;
  std::vector<double> per_mode;
  std::optional<std::string> mismatch;

  if (!a.direction.empty()) {
    if (a.direction != "up" && a.direction != "down") {
      throw InvalidArgument("--direction must be 'up' or 'down'");
    }
    if (a.per_mode) throw InvalidArgument("--per-mode-sse applies to unimodal fits only");
    const Direction d = a.direction == "up" ? Direction::nondecreasing : Direction::nonincreasing;
    const IsotonicFit fit = pava(y, d);
    fitted = fit.fitted;
    summary["direction"] = std::string(to_string(d));
    summary["sse"] = fit.sse;
    config["direction"] = a.direction;
    if (a.oracle) {
      const Sequence ref = oracle::brute_monotone_projection(y, d);
      const double diff = max_abs_diff(fitted, ref);
      summary["oracle"] = {{"max_abs_diff", diff}, {"agrees", diff <= 1e-9}};
      if (diff > 1e-9) mismatch = "fitted values differ from the exhaustive reference by " + format_double(diff);
    }
  } else {
    const UnimodalFit fit = unimodal_lse(y, {.keep_per_mode_sse = a.per_mode});
    fitted = fit.fitted;
    per_mode = fit.per_mode_sse;
    summary["mode"] = fit.mode;
    summary["split"] = fit.split;
    summary["sse"] = fit.sse;
    if (a.oracle) {
      const oracle::UnimodalResult ref = oracle::brute_unimodal_projection(y);
      const double diff = max_abs_diff(fitted, ref.fitted);
      const bool agrees = diff <= 1e-9 && ref.mode == fit.mode;
      summary["oracle"] = {{"max_abs_diff", diff}, {"mode", ref.mode}, {"agrees", agrees}};
      if (!agrees) {
        mismatch = "exhaustive reference gives mode " + std::to_string(ref.mode) +
                   " and max coordinate difference " + format_double(diff);
      }
    }
  }

  Sink sink(a.output, ctx.out);
  std::ostream& os = sink.stream();
  os << "index,y,fitted\n";
  for (std::size_t i = 0; i < n; ++i) {
    os << (i + 1) << ',' << format_double(y[i]) << ',' << format_double(fitted[i]) << '\n';
  }
  if (a.per_mode) {
    os << "\nmode,per_mode_sse\n";
    for (std::size_t m = 0; m < per_mode.size(); ++m) os << (m + 1) << ',' << format_double(per_mode[m]) << '\n';
  }
  const json m = manifest(ctx, "fit", config, 0);
  write_sidecar(sink, m);
  summary["manifest"] = m;
  if (a.summary.empty()) {
    write_json(ctx.err, summary);
  } else {
    Sink s(a.summary, ctx.out);
    write_json(s.stream(), summary);
  }
  if (mismatch) throw CheckFailed("oracle mismatch: " + *mismatch);
  return kExitOk;
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string output;
};

int cmd_simulate(Context& ctx, const SimulateArgs& a) {
  Settings s = Settings::parse(read_file(a.config));
  for (const std::string& o : a.overrides) s.set(o);
  ExperimentConfig config = read_experiment(s);
  if (ctx.globals.seed) config.seed = *ctx.globals.seed;
  config.threads = ctx.globals.threads;
  const RiskReport report = run_experiment(config);

  Sink sink(a.output, ctx.out);
  std::ostream& os = sink.stream();
  os << "n,mse_mean,mse_stderr,thm1_ratio,thm2_rhs,coverage_thm2,oracle_rhs\n";
  for (const RiskRow& r : report.rows) {
    os << r.n << ',' << format_double(r.mse_mean) << ',' << format_double(r.mse_stderr) << ','
       << format_double(r.minimax_ratio) << ',' << format_double(r.adaptive_rhs) << ','
       << format_double(r.coverage) << ',';
    if (r.oracle_rhs) os << format_double(*r.oracle_rhs);
    os << '\n';
  }
  write_sidecar(sink, manifest(ctx, "simulate", to_json(config), config.seed));
  return kExitOk;
}

// ---- scaling ---------------------------------------------------------------

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

int cmd_scaling(Context& ctx, const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> n_col;
  std::optional<std::size_t> mse_col;
  std::vector<double> ns;
  std::vector<double> mses;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (!n_col) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == "n") n_col = i;
        if (fields[i] == "mse_mean") mse_col = i;
      }
      if (!n_col || !mse_col) throw ParseError(line_no, "header must contain columns 'n' and 'mse_mean'");
      continue;
    }
    if (fields.size() <= std::max(*n_col, *mse_col)) throw ParseError(line_no, "row has too few columns");
    const auto n = parse_number(fields[*n_col]);
    const auto mse = parse_number(fields[*mse_col]);
    if (!n || !mse) throw ParseError(line_no, "expected numbers in columns n and mse_mean");
    ns.push_back(*n);
    mses.push_back(*mse);
  }
  if (!n_col) throw ParseError(1, "empty report");
  const SlopeFit fit = scaling_slope(ns, mses);
  json j{{"slope", fit.slope}, {"stderr", fit.stderr_}, {"n_points", fit.points}};
  j["manifest"] = manifest(ctx, "scaling", {{"report", path}}, 0);
  write_json(ctx.out, j);
  return kExitOk;
}

// ---- slicing ---------------------------------------------------------------

struct SlicingArgs {
  std::size_t n = 6;
  std::size_t grid = 200;
  double sigma = 1.0;
  std::string output;
};

int cmd_slicing(Context& ctx, const SlicingArgs& a) {
  if (a.n < 1 || a.n > 8) throw InvalidArgument("slicing: n must be in [1, 8]");
  if (a.grid < 2) throw InvalidArgument("slicing: grid needs at least 2 points");
  if (!(a.sigma >= 0.0) || !std::isfinite(a.sigma)) throw InvalidArgument("slicing: sigma must be >= 0");
  const std::uint64_t seed = ctx.globals.seed.value_or(0);

  SplitMix64 theta_rng = make_stream(seed, a.n, 0);
  const Sequence theta = random_unimodal(a.n, theta_rng);
  SplitMix64 noise_rng = make_stream(seed, a.n, 1);
  Sequence z(a.n);
  fill_standard_normal(noise_rng, z);
  Sequence y(a.n);
  for (std::size_t i = 0; i < a.n; ++i) {
    z[i] *= a.sigma;
    y[i] = theta[i] + z[i];
  }
  const double znorm = std::sqrt(kernels::squared_norm(z));
  const std::vector<double> grid = linear_grid(0.0, 2.0 * znorm + 1.0, a.grid);
  const SlicingReport r = slicing_check(y, theta, grid);
  const double tol = 1e-3 * (1.0 + znorm * znorm);
  const bool pass = r.identity_gap <= tol && (!r.has_negative_tail || r.termination_holds);

  json j{{"n", a.n},
         {"sigma", a.sigma},
         {"theta_star", theta},
         {"y", y},
         {"achieved_radius", r.achieved_radius},
         {"f_at_achieved", r.f_at_achieved},
         {"max_f_on_grid", r.max_f_on_grid},
         {"identity_gap", r.identity_gap},
         {"signed_gap", r.signed_gap},
         {"attainment_gap", r.attainment_gap},
         {"tolerance", tol},
         {"has_negative_tail", r.has_negative_tail},
         {"negative_tail_start", r.negative_tail_start},
         {"termination_holds", r.termination_holds},
         {"pass", pass}};
  j["manifest"] = manifest(ctx, "slicing", {{"n", a.n}, {"grid", a.grid}, {"sigma", a.sigma}}, seed);
  Sink sink(a.output, ctx.out);
  write_json(sink.stream(), j);
  if (!pass) throw CheckFailed("slicing identity outside tolerance (gap " + format_double(r.identity_gap) + ")");
  return kExitOk;
}

// ---- width -----------------------------------------------------------------

struct KeyArgs {
  std::vector<std::string> overrides;
  std::string output;
};

int cmd_width(Context& ctx, const KeyArgs& a) {
  Settings s;
  for (const std::string& o : a.overrides) s.set(o);
  const std::size_t n = s.count("n", 64);
  const std::size_t reps = s.count("reps", 50);
  const std::size_t points = s.count("t_points", 10);
  const double t_max = s.real("t_max", std::sqrt(static_cast<double>(n)));
  const std::string bound = s.text("bound", "worst_case");
  WidthOptions opts;
  opts.alpha = s.real("alpha", 1.0);
  opts.threads = ctx.globals.threads;
  if (bound == "worst_case") {
    opts.bound = WidthBound::worst_case;
  } else if (bound == "piecewise") {
    opts.bound = WidthBound::piecewise_constant;
  } else {
    throw InvalidArgument("bound: expected worst_case or piecewise, got '" + bound + "'");
  }
  const SignalSpec signal = read_signal(s);
  const std::uint64_t seed = resolve_seed(ctx, s, 0);
  s.reject_unused();
  if (points < 1) throw InvalidArgument("t_points must be >= 1");
  if (!(t_max > 0.0)) throw InvalidArgument("t_max must be positive");

  const GeneratedSignal g = generate_signal(signal, n);
  std::vector<double> grid = linear_grid(t_max / static_cast<double>(points), t_max, points);
  const WidthEstimate est = localized_width_mc(g.theta, grid, reps, seed, opts);

  bool monotone = true;
  for (std::size_t j = 1; j < est.mean_sup.size(); ++j) {
    if (est.mean_sup[j] < est.mean_sup[j - 1] - 1e-9 * (1.0 + std::abs(est.mean_sup[j - 1]))) monotone = false;
  }
  json j{{"n", n},
         {"replications", reps},
         {"bound", bound},
         {"s1_plus_s2", g.s1 + g.s2},
         {"V", g.V},
         {"t", est.t_grid},
         {"mean_sup", est.mean_sup},
         {"std_err", est.std_err},
         {"bound_curve", est.bound_curve},
         {"ratio", est.ratio},
         {"max_ratio", est.max_ratio},
         {"mean_sup_nondecreasing", monotone}};
  json config{{"n", n}, {"reps", reps}, {"t_points", points}, {"t_max", t_max},
              {"bound", bound}, {"alpha", opts.alpha}, {"signal", to_json(signal)}};
  j["manifest"] = manifest(ctx, "width", config, seed);
  Sink sink(a.output, ctx.out);
  write_json(sink.stream(), j);
  if (!monotone) throw CheckFailed("mean localized supremum decreased along the radius grid");
  return kExitOk;
}

// ---- statdim ---------------------------------------------------------------

int cmd_statdim(Context& ctx, const KeyArgs& a) {
  Settings s;
  for (const std::string& o : a.overrides) s.set(o);
  const std::size_t n = s.count("n", 64);
  const std::size_t reps = s.count("reps", 10000);
  StatDimOptions opts;
  opts.pointwise_subsample = s.count("subsample", opts.pointwise_subsample);
  opts.threads = ctx.globals.threads;
  const std::uint64_t seed = resolve_seed(ctx, s, 0);
  s.reject_unused();

  const StatDimEstimate est = statistical_dimension_mc(n, reps, seed, opts);
  const bool bound_ok = est.estimate <= est.log_en_bound + 3.0 * est.std_err;
  const bool pointwise_ok = est.pointwise_max_error <= 1e-6;
  json j{{"n", n},
         {"replications", reps},
         {"estimate", est.estimate},
         {"stderr", est.std_err},
         {"log_en_bound", est.log_en_bound},
         {"pointwise_checked", est.pointwise_checked},
         {"pointwise_max_error", est.pointwise_max_error},
         {"within_bound", bound_ok},
         {"pointwise_ok", pointwise_ok}};
  j["manifest"] = manifest(ctx, "statdim", {{"n", n}, {"reps", reps}, {"subsample", opts.pointwise_subsample}}, seed);
  Sink sink(a.output, ctx.out);
  write_json(sink.stream(), j);
  if (!bound_ok) throw CheckFailed("estimate exceeds log(en) + 3 stderr");
  if (!pointwise_ok) throw CheckFailed("pointwise identity error above 1e-6");
  return kExitOk;
}

void apply_kernels(const std::string& name) {
  if (name == "auto") return;
  if (name == "scalar") {
    kernels::set_active(kernels::Backend::scalar);
  } else if (name == "avx2") {
    kernels::set_active(kernels::Backend::avx2);
  } else {
    throw InvalidArgument("--kernels must be auto, scalar or avx2");
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  Context ctx{in, out, err, {}};
  CLI::App app{"Unimodal and isotonic least squares: fitting, risk experiments and geometry checks"};
  app.name("unireg");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(UNIREG_VERSION));
  app.add_option("--kernels", ctx.globals.kernels, "Kernel backend: auto, scalar or avx2");
  app.add_option("--threads", ctx.globals.threads, "Worker threads (speed only, never results)")
      ->check(CLI::PositiveNumber);
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = app.add_option("--seed", seed, "Seed overriding any config value");

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a sequence read from a file or standard input");
  fit_cmd->add_option("input", fit.input, "Input path, '-' for standard input");
  fit_cmd->add_option("--direction", fit.direction, "Monotone fit instead: up or down");
  fit_cmd->add_flag("--per-mode-sse", fit.per_mode, "Append the per-mode SSE table");
  fit_cmd->add_flag("--oracle", fit.oracle, "Cross-check against exhaustive enumeration (small n)");
  fit_cmd->add_option("--output", fit.output, "CSV output path (default standard output)");
  fit_cmd->add_option("--summary", fit.summary, "JSON summary path (default standard error)");

  SimulateArgs sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Run a risk experiment from a key=value config");
  sim_cmd->add_option("config", sim.config, "Config file")->required();
  sim_cmd->add_option("--set", sim.overrides, "Override a config key (key=value)");
  sim_cmd->add_option("--output", sim.output, "CSV output path (default standard output)");

  std::string report_path;
  CLI::App* scaling_cmd = app.add_subcommand("scaling", "Log-log slope of mse_mean against n");
  scaling_cmd->add_option("report", report_path, "CSV written by simulate")->required();

  SlicingArgs slicing;
  CLI::App* slicing_cmd = app.add_subcommand("slicing", "Check the slicing identity on a random instance");
  slicing_cmd->add_option("--n", slicing.n, "Sequence length (1..8)");
  slicing_cmd->add_option("--grid", slicing.grid, "Radius grid points");
  slicing_cmd->add_option("--sigma", slicing.sigma, "Noise level");
  slicing_cmd->add_option("--output", slicing.output, "JSON output path");

  KeyArgs width;
  CLI::App* width_cmd = app.add_subcommand("width", "Monte Carlo localized width curve");
  width_cmd->add_option("--set", width.overrides, "key=value: n, reps, t_points, t_max, bound, alpha, signal.*");
  width_cmd->add_option("--output", width.output, "JSON output path");

  KeyArgs statdim;
  CLI::App* statdim_cmd = app.add_subcommand("statdim", "Statistical dimension of the monotone cone");
  statdim_cmd->add_option("--set", statdim.overrides, "key=value: n, reps, subsample");
  statdim_cmd->add_option("--output", statdim.output, "JSON output path");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitInput;
    }
    if (seed_opt->count() > 0) ctx.globals.seed = seed;
    apply_kernels(ctx.globals.kernels);

    if (*fit_cmd) return cmd_fit(ctx, fit);
    if (*sim_cmd) return cmd_simulate(ctx, sim);
    if (*scaling_cmd) return cmd_scaling(ctx, report_path);
    if (*slicing_cmd) return cmd_slicing(ctx, slicing);
    if (*width_cmd) return cmd_width(ctx, width);
    if (*statdim_cmd) return cmd_statdim(ctx, statdim);
    return kExitInput;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const CheckFailed& e) {
    err << "check failed: " << e.what() << '\n';
    return kExitMismatch;
  } catch (const ConvergenceError& e) {
    err << "convergence failure: " << e.what() << " (gap " << format_double(e.gap()) << ")\n";
    return kExitConvergence;
  } catch (const InfeasibleError& e) {
    err << "convergence failure: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace unireg::cli
