#include "config.hpp"

#include <charconv>
#include <sstream>

#include "input.hpp"
#include "unireg/errors.hpp"

namespace unireg::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Settings Settings::parse(std::string_view text) {
  Settings s;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key=value, got '" + t + "'");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw ParseError(line_no, "empty key");
    s.values_[key] = trim(std::string_view(t).substr(eq + 1));
    s.lines_[key] = line_no;
  }
  return s;
}

void Settings::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw InvalidArgument("expected key=value, got '" + std::string(assignment) + "'");
  }
  const std::string key = trim(assignment.substr(0, eq));
  if (key.empty()) throw InvalidArgument("empty key in '" + std::string(assignment) + "'");
  values_[key] = trim(assignment.substr(eq + 1));
  lines_.erase(key);
}

bool Settings::has(const std::string& key) const { return values_.count(key) != 0; }

const std::string& Settings::raw(const std::string& key) {
  used_.insert(key);
  return values_.at(key);
}

std::string Settings::text(const std::string& key, const std::string& fallback) {
  return has(key) ? raw(key) : fallback;
}

double Settings::real(const std::string& key, double fallback) {
  if (!has(key)) return fallback;
  const auto v = parse_number(raw(key));
  if (!v) throw InvalidArgument("key " + key + ": expected a number, got '" + values_.at(key) + "'");
  return *v;
}

std::size_t Settings::count(const std::string& key, std::size_t fallback) {
  if (!has(key)) return fallback;
  const std::string& v = raw(key);
  std::size_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw InvalidArgument("key " + key + ": expected a nonnegative integer, got '" + v + "'");
  }
  return out;
}

std::uint64_t Settings::seed(const std::string& key, std::uint64_t fallback) {
  return has(key) ? static_cast<std::uint64_t>(count(key, 0)) : fallback;
}

std::vector<double> Settings::reals(const std::string& key) {
  std::vector<double> out;
  if (!has(key)) return out;
  for (const std::string& item : split_list(raw(key))) {
    const auto v = parse_number(item);
    if (!v) throw InvalidArgument("key " + key + ": expected a number, got '" + item + "'");
    out.push_back(*v);
  }
  return out;
}

std::vector<std::size_t> Settings::counts(const std::string& key) {
  std::vector<std::size_t> out;
  if (!has(key)) return out;
  for (const std::string& item : split_list(raw(key))) {
    std::size_t v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw InvalidArgument("key " + key + ": expected a nonnegative integer, got '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

void Settings::reject_unused() const {
  std::string unknown;
  for (const auto& [key, value] : values_) {
    if (used_.count(key)) continue;
    if (!unknown.empty()) unknown += ", ";
    unknown += key;
    if (auto it = lines_.find(key); it != lines_.end()) unknown += " (line " + std::to_string(it->second) + ")";
  }
  if (!unknown.empty()) throw InvalidArgument("unknown or inapplicable key(s): " + unknown);
}

SignalSpec read_signal(Settings& s) {
  const std::string kind = s.text("signal.kind", "smooth_bump");
  if (kind == "piecewise_constant") {
    return PiecewiseConstantSignal{s.reals("signal.breakpoints"), s.reals("signal.levels")};
  }
  if (kind == "smooth_bump") return SmoothBumpSignal{s.real("signal.V", 1.0)};
  if (kind == "indicator") return IndicatorSignal{s.real("signal.fraction", 1.0 / 3.0)};
  if (kind == "staircase") return StaircaseSignal{s.count("signal.pieces", 2), s.real("signal.V", 1.0)};
  if (kind == "constant") return ConstantSignal{s.real("signal.level", 0.0)};
  if (kind == "custom") return CustomSignal{s.reals("signal.values")};
  throw InvalidArgument("signal.kind: unknown signal '" + kind +
                        "' (piecewise_constant, smooth_bump, indicator, staircase, constant, custom)");
}

NoiseSpec read_noise(Settings& s) {
  NoiseSpec spec;
  const std::string kind = s.text("noise.kind", "gaussian");
  if (kind == "gaussian") {
    spec.kind = NoiseKind::gaussian;
  } else if (kind == "uniform_bounded") {
    spec.kind = NoiseKind::uniform_bounded;
  } else if (kind == "rademacher") {
    spec.kind = NoiseKind::rademacher;
  } else {
    throw InvalidArgument("noise.kind: unknown noise '" + kind + "' (gaussian, uniform_bounded, rademacher)");
  }
  spec.sigma = s.real("noise.sigma", 1.0);
  validate_noise(spec);
  return spec;
}

ExperimentConfig read_experiment(Settings& s) {
  ExperimentConfig c;
  c.n_grid = s.counts("n_grid");
  c.replications = s.count("reps", c.replications);
  c.seed = s.seed("seed", c.seed);
  c.alpha = s.real("alpha", c.alpha);
  const std::string est = s.text("estimator", "unimodal");
  if (est == "unimodal") {
    c.estimator = Estimator::unimodal;
  } else if (est == "isotonic") {
    c.estimator = Estimator::isotonic;
  } else {
    throw InvalidArgument("estimator: expected unimodal or isotonic, got '" + est + "'");
  }
  c.signal = read_signal(s);
  c.noise = read_noise(s);
  s.reject_unused();
  validate_config(c);
  return c;
}

nlohmann::json to_json(const SignalSpec& spec) {
  using nlohmann::json;
  return std::visit(
      overloaded{
          [](const PiecewiseConstantSignal& p) {
            return json{{"kind", "piecewise_constant"}, {"breakpoints", p.breakpoints}, {"levels", p.levels}};
          },
          [](const SmoothBumpSignal& p) { return json{{"kind", "smooth_bump"}, {"V", p.V}}; },
          [](const IndicatorSignal& p) { return json{{"kind", "indicator"}, {"fraction", p.fraction}}; },
          [](const StaircaseSignal& p) {
            return json{{"kind", "staircase"}, {"pieces", p.pieces}, {"V", p.V}};
          },
          [](const ConstantSignal& p) { return json{{"kind", "constant"}, {"level", p.level}}; },
          [](const CustomSignal& p) { return json{{"kind", "custom"}, {"values", p.values}}; },
      },
      spec);
}

nlohmann::json to_json(const NoiseSpec& spec) {
  return {{"kind", std::string(to_string(spec.kind))}, {"sigma", spec.sigma}};
}

nlohmann::json to_json(const ExperimentConfig& c) {
  return {{"n_grid", c.n_grid},
          {"reps", c.replications},
          {"seed", c.seed},
          {"alpha", c.alpha},
          {"estimator", std::string(to_string(c.estimator))},
          {"signal", to_json(c.signal)},
          {"noise", to_json(c.noise)}};
}

}  // namespace unireg::cli
