#include <algorithm>
#include <cmath>
#include <string>

#include "unireg/errors.hpp"
#include "unireg/geometry.hpp"
#include "unireg/isotonic.hpp"
#include "unireg/kernels.hpp"
#include "unireg/unimodal.hpp"

namespace unireg {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Number of consecutive cycles with settled iterates and a constant
// correction drift before the intersection is declared empty.
constexpr std::size_t kDriftCycles = 50;

}  // namespace

void validate_set(const ConvexSet& set, std::size_t n) {
  std::visit(overloaded{
                 [n](const MonotoneConeSet& s) {
                   if (s.begin > s.end || s.end > n) {
                     throw InvalidArgument("monotone cone index range [" +
                                           std::to_string(s.begin) + ", " +
                                           std::to_string(s.end) + ") outside the sequence");
                   }
                 },
                 [n](const BallSet& s) {
                   if (s.center.size() != n) throw InvalidArgument("ball center has wrong length");
                   require_sequence(s.center, "ball center");
                   if (!(s.radius >= 0.0) || !std::isfinite(s.radius)) {
                     throw InvalidArgument("ball radius must be finite and nonnegative");
                   }
                 },
                 [n](const ModeConeSet& s) {
                   if (s.mode < 1 || s.mode > n) throw InvalidArgument("mode cone index out of range");
                 },
             },
             set);
}

void project_onto(const ConvexSet& set, std::span<const double> in, std::span<double> out) {
  if (in.size() != out.size()) throw InvalidArgument("project_onto: length mismatch");
  std::visit(overloaded{
                 [&](const MonotoneConeSet& s) {
                   std::copy(in.begin(), in.end(), out.begin());
                   if (s.end - s.begin < 2) return;
                   PavaBlockStack stack(s.direction, s.end - s.begin);
                   for (std::size_t i = s.begin; i < s.end; ++i) stack.push(in[i]);
                   stack.write_fitted(out.subspan(s.begin, s.end - s.begin));
                 },
                 [&](const BallSet& s) {
                   const double r = kernels::distance(in, s.center);
                   if (r <= s.radius) {
                     std::copy(in.begin(), in.end(), out.begin());
                     return;
                   }
                   const double scale = s.radius / r;
                   for (std::size_t i = 0; i < in.size(); ++i) {
                     out[i] = s.center[i] + scale * (in[i] - s.center[i]);
                   }
                 },
                 [&](const ModeConeSet& s) {
                   const Sequence p = mode_cone_projection(in, s.mode);
                   std::copy(p.begin(), p.end(), out.begin());
                 },
             },
             set);
}

Sequence dykstra_project(std::span<const double> y, std::span<const ConvexSet> sets,
                         const DykstraOptions& options) {
  require_sequence(y, "dykstra input");
  if (sets.empty()) throw InvalidArgument("dykstra_project: no sets given");
  if (!(options.tol > 0.0)) throw InvalidArgument("dykstra_project: tol must be positive");
  const std::size_t n = y.size();
  for (const ConvexSet& s : sets) validate_set(s, n);

  Sequence x(y.begin(), y.end());
  Sequence previous(n);
  Sequence shifted(n);
  std::vector<Sequence> corrections(sets.size(), Sequence(n, 0.0));

  double last_drift = 0.0;
  std::size_t drift_cycles = 0;
  double move = 0.0;
  for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
    previous = x;
    double correction_change = 0.0;
    for (std::size_t k = 0; k < sets.size(); ++k) {
      Sequence& p = corrections[k];
      for (std::size_t i = 0; i < n; ++i) shifted[i] = x[i] + p[i];
      project_onto(sets[k], shifted, x);
      for (std::size_t i = 0; i < n; ++i) {
        const double updated = shifted[i] - x[i];
        correction_change += (updated - p[i]) * (updated - p[i]);
        p[i] = updated;
      }
    }
    move = kernels::distance(x, previous);
    const double drift = std::sqrt(correction_change);
    if (move < options.tol) {
      if (drift < options.tol) return x;
      if (std::abs(drift - last_drift) <= 1e-6 * drift) {
        if (++drift_cycles >= kDriftCycles) {
          throw InfeasibleError("dykstra_project: intersection appears empty (corrections drift by " +
                                std::to_string(drift) + " per cycle)");
        }
      } else {
        drift_cycles = 0;
      }
    } else {
      drift_cycles = 0;
    }
    last_drift = drift;
  }
  throw ConvergenceError("dykstra_project: no convergence after " +
                             std::to_string(options.max_iter) + " cycles",
                         x, move);
}

}  // namespace unireg
