#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "unireg/risklab.hpp"

namespace unireg::cli {

/// Flat key=value settings. Lines starting with '#' and blank lines are
/// ignored; later assignments override earlier ones.
class Settings {
 public:
  static Settings parse(std::string_view text);

  /// Applies a single "key=value" override.
  void set(std::string_view assignment);

  bool has(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback);
  double real(const std::string& key, double fallback);
  std::size_t count(const std::string& key, std::size_t fallback);
  std::uint64_t seed(const std::string& key, std::uint64_t fallback);
  std::vector<double> reals(const std::string& key);
  std::vector<std::size_t> counts(const std::string& key);

  /// Throws InvalidArgument naming every key that was never read.
  void reject_unused() const;

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, std::size_t> lines_;
  std::set<std::string> used_;
  const std::string& raw(const std::string& key);
};

SignalSpec read_signal(Settings& s);
NoiseSpec read_noise(Settings& s);

/// Keys: n_grid, reps, seed, alpha, estimator, signal.*, noise.*.
ExperimentConfig read_experiment(Settings& s);

nlohmann::json to_json(const SignalSpec& spec);
nlohmann::json to_json(const NoiseSpec& spec);
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace unireg::cli
