#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "unireg/sequence.hpp"

namespace unireg {

struct UnimodalFit {
  Sequence fitted;
  // 1-based smallest m with fitted in C_m (first position of the maximum).
  std::size_t mode = 1;
  // 1-based smallest minimizer of per_mode_sse; the fit is the rising PAVA fit
  // of y_1..y_split followed by the falling fit of y_{split+1}..y_n. It can sit
  // left of `mode` when the rising half ends below the falling half's start.
  std::size_t split = 1;
  double sse = 0.0;  // ||y - fitted||^2, two-pass
  // per_mode_sse[m - 1] = p[m] + s[m] for m = 1..n (prefix nondecreasing error
  // of y_1..y_m plus suffix nonincreasing error of y_{m+1}..y_n). Empty when
  // UnimodalOptions::keep_per_mode_sse is false.
  std::vector<double> per_mode_sse;
};

struct UnimodalOptions {
  bool keep_per_mode_sse = true;
};

/// Per-mode errors within kModeTieTolerance * sum((y - mean)^2) of the minimum
/// count as tied and the smallest index wins. The brute-force reference uses
/// the same window.
inline constexpr double kModeTieTolerance = 1e-12;

/// Least-squares projection of y onto the unimodal sequences, O(n).
UnimodalFit unimodal_lse(std::span<const double> y, const UnimodalOptions& options = {});

/// Exact projection onto the mode cone
///   C_m = {theta : theta_1 <= ... <= theta_m >= theta_{m+1} >= ... >= theta_n}
/// (m is 1-based). Solves the two chains with PAVA and, when the coupling
/// theta_m >= theta_{m+1} is violated, pools the two top blocks and keeps
/// absorbing the larger violating neighbour. O(n).
Sequence mode_cone_projection(std::span<const double> y, std::size_t mode);

/// Projection onto C_m by Dykstra's alternating projections between the rising
/// half-cone on 1..m and the falling half-cone on m..n. Converged once
/// successive cycles move by less than `tol`; throws ConvergenceError after
/// `max_iter` cycles.
Sequence project_onto_mode_cone(std::span<const double> y, std::size_t mode, double tol = 1e-10,
                                std::size_t max_iter = 100000);

bool in_mode_cone(std::span<const double> theta, std::size_t mode, double tol = 0.0);

}  // namespace unireg
