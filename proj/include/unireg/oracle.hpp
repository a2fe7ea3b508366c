#pragma once

// Brute-force references for small inputs. Each one enumerates every
// consecutive-block partition, so they are exponential in n and refuse larger
// inputs with SizeLimitExceeded instead of falling back to the fast paths.

#include <cstddef>
#include <span>

#include "unireg/sequence.hpp"

namespace unireg::oracle {

inline constexpr std::size_t kMaxMonotoneSize = 12;
inline constexpr std::size_t kMaxUnimodalSize = 10;
inline constexpr std::size_t kMaxSegmentSize = 16;

/// Projection onto the monotone cone by enumerating all 2^{n-1} partitions and
/// keeping the first ordered one with minimal SSE. Partitions are visited in
/// increasing order of their cut bitmask.
Sequence brute_monotone_projection(std::span<const double> y, Direction direction);

struct UnimodalResult {
  Sequence fitted;
  std::size_t mode = 1;   // first position of the maximum of `fitted`
  std::size_t split = 1;  // smallest minimizing split, same tie window as unimodal_lse
  double sse = 0.0;
};

/// min over m of the brute rising fit of y_1..y_m followed by the brute
/// falling fit of y_{m+1}..y_n.
UnimodalResult brute_unimodal_projection(std::span<const double> y);

/// Projection onto the mode cone C_m by enumerating partitions (n <= 12).
Sequence brute_mode_cone_projection(std::span<const double> y, std::size_t mode);

/// Minimal within-segment SSE over all partitions into exactly k blocks,
/// summed left to right with the same prefix arithmetic as the DP.
double exhaustive_segment_error(std::span<const double> theta, std::size_t k);

}  // namespace unireg::oracle
