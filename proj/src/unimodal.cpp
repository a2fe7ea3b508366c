#include "unireg/unimodal.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "unireg/errors.hpp"
#include "unireg/geometry.hpp"
#include "unireg/isotonic.hpp"

namespace unireg {
namespace {

void require_mode(std::size_t mode, std::size_t n) {
  if (mode < 1 || mode > n) {
    throw InvalidArgument("mode " + std::to_string(mode) + " outside [1, " + std::to_string(n) +
                          "]");
  }
}

double total_sum_of_squares(std::span<const double> y) {
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double tss = 0.0;
  for (double v : y) tss += (v - mean) * (v - mean);
  return tss;
}

struct Pool {
  std::size_t count = 0;
  double sum = 0.0;
  double level() const { return sum / static_cast<double>(count); }
};

}  // namespace

UnimodalFit unimodal_lse(std::span<const double> y, const UnimodalOptions& options) {
  require_sequence(y, "unimodal input");
  const std::size_t n = y.size();
  const std::vector<double> prefix = prefix_isotonic_sse(y, Direction::nondecreasing);
  const std::vector<double> suffix = suffix_antitonic_sse(y);

  std::vector<double> per_mode(n);
  for (std::size_t m = 1; m <= n; ++m) per_mode[m - 1] = prefix[m] + suffix[m];

  const double best = *std::min_element(per_mode.begin(), per_mode.end());
  const double window = best + kModeTieTolerance * total_sum_of_squares(y);
  std::size_t split = 1;
  while (per_mode[split - 1] > window) ++split;

  UnimodalFit fit;
  fit.split = split;
  fit.fitted.resize(n);
  const IsotonicFit rising = pava(y.first(split), Direction::nondecreasing);
  std::copy(rising.fitted.begin(), rising.fitted.end(), fit.fitted.begin());
  if (split < n) {
    const IsotonicFit falling = pava(y.subspan(split), Direction::nonincreasing);
    std::copy(falling.fitted.begin(), falling.fitted.end(),
              fit.fitted.begin() + static_cast<std::ptrdiff_t>(split));
  }
  fit.mode = static_cast<std::size_t>(
                 std::max_element(fit.fitted.begin(), fit.fitted.end()) - fit.fitted.begin()) +
             1;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) sse += (y[i] - fit.fitted[i]) * (y[i] - fit.fitted[i]);
  fit.sse = sse;
  if (options.keep_per_mode_sse) fit.per_mode_sse = std::move(per_mode);
  return fit;
}

Sequence mode_cone_projection(std::span<const double> y, std::size_t mode) {
  require_sequence(y, "mode cone input");
  const std::size_t n = y.size();
  require_mode(mode, n);

  // theta_m is the root of two chains that both lie below it.
  PavaBlockStack left_stack(Direction::nondecreasing, mode);
  for (std::size_t i = 0; i + 1 < mode; ++i) left_stack.push(y[i]);
  PavaBlockStack right_stack(Direction::nondecreasing, n - mode + 1);
  for (std::size_t i = n; i > mode; --i) right_stack.push(y[i - 1]);

  std::vector<Pool> left;
  std::vector<Pool> right;
  for (const PavaBlock& b : left_stack.blocks()) left.push_back({b.count, b.sum});
  for (const PavaBlock& b : right_stack.blocks()) right.push_back({b.count, b.sum});

  constexpr double tol = PavaBlockStack::merge_tolerance;
  Pool root{1, y[mode - 1]};
  // Absorb the higher violating child first.
  while (true) {
    const bool left_viol = !left.empty() && left.back().level() >= root.level() - tol;
    const bool right_viol = !right.empty() && right.back().level() >= root.level() - tol;
    if (!left_viol && !right_viol) break;
    const bool take_left = left_viol && (!right_viol || left.back().level() >= right.back().level());
    std::vector<Pool>& side = take_left ? left : right;
    root.count += side.back().count;
    root.sum += side.back().sum;
    side.pop_back();
  }

  Sequence out(n);
  std::size_t pos = 0;
  for (const Pool& b : left) {
    std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(pos), b.count, b.level());
    pos += b.count;
  }
  if (root.count > 0) {
    std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(pos), root.count, root.level());
    pos += root.count;
  }
  // Right blocks are stored outermost-first (from index n-1 inward).
  std::size_t end = n;
  for (const Pool& b : right) {
    std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(end - b.count), b.count, b.level());
    end -= b.count;
  }
  if (pos != end) throw std::logic_error("mode_cone_projection: block bookkeeping mismatch");
  return out;
}

Sequence project_onto_mode_cone(std::span<const double> y, std::size_t mode, double tol,
                                std::size_t max_iter) {
  require_sequence(y, "mode cone input");
  require_mode(mode, y.size());
  if (!(tol > 0.0)) throw InvalidArgument("project_onto_mode_cone: tol must be positive");
  const std::vector<ConvexSet> sets{
      MonotoneConeSet{Direction::nondecreasing, 0, mode},
      MonotoneConeSet{Direction::nonincreasing, mode - 1, y.size()},
  };
  return dykstra_project(y, sets, DykstraOptions{tol, max_iter});
}

bool in_mode_cone(std::span<const double> theta, std::size_t mode, double tol) {
  require_mode(mode, theta.size());
  for (std::size_t i = 1; i < mode; ++i) {
    if (theta[i] < theta[i - 1] - tol) return false;
  }
  for (std::size_t i = mode; i < theta.size(); ++i) {
    if (theta[i] > theta[i - 1] + tol) return false;
  }
  return true;
}

}  // namespace unireg
