#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

#include "unireg/rng.hpp"
#include "unireg/sequence.hpp"

namespace unireg::test {

/// Mix of continuous draws and small integers, so ties and plateaus show up.
inline Sequence random_input(SplitMix64& rng, std::size_t n) {
  Sequence y(n);
  fill_standard_normal(rng, y);
  if (rng() % 3 == 0) {
    for (double& v : y) v = std::round(2.0 * v);
  }
  return y;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace unireg::test
