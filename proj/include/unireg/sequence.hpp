#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace unireg {

/// A finite real-valued signal. Every public entry point validates its
/// sequences with require_sequence() before touching them.
using Sequence = std::vector<double>;

enum class Direction { nondecreasing, nonincreasing };

std::string_view to_string(Direction d) noexcept;

/// Throws InvalidArgument if `y` is empty or holds a NaN/infinite entry.
void require_sequence(std::span<const double> y, std::string_view name = "sequence");

/// Throws InvalidArgument unless both sequences have the same length.
void require_same_length(std::span<const double> a, std::span<const double> b);

bool is_monotone(std::span<const double> y, Direction d, double tol = 0.0);

/// True when y is nondecreasing up to some index and nonincreasing after it.
bool is_unimodal(std::span<const double> y, double tol = 0.0);

/// 1-based smallest index m such that y lies in the mode cone C_m, i.e. the
/// first position of the maximum. Requires a unimodal input.
std::size_t smallest_mode(std::span<const double> y);

/// Number of distinct values (exact comparison).
std::size_t distinct_count(std::span<const double> y);

double range_of(std::span<const double> y);

/// Evenly spaced grid with `points` entries covering [lo, hi].
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

}  // namespace unireg
