#include "unireg/rng.hpp"

#include <random>

namespace unireg {

void fill_standard_normal(SplitMix64& rng, std::span<double> out) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : out) v = normal(rng);
}

}  // namespace unireg
