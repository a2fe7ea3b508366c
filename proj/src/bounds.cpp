#include <cmath>
#include <numbers>
#include <string>

#include "unireg/errors.hpp"
#include "unireg/risklab.hpp"

namespace unireg {
namespace {

void require_sigma_alpha(double sigma, double alpha) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be positive");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be positive");
}

}  // namespace

double minimax_dominant_term(std::size_t n, double V, double sigma) {
  if (n < 1) throw InvalidArgument("minimax_dominant_term: n must be >= 1");
  if (!(V >= 0.0)) throw InvalidArgument("minimax_dominant_term: V must be >= 0");
  if (!(sigma > 0.0)) throw InvalidArgument("minimax_dominant_term: sigma must be positive");
  return std::pow(sigma, 4.0 / 3.0) * std::pow(V + sigma, 2.0 / 3.0) *
         std::pow(static_cast<double>(n), -2.0 / 3.0);
}

double minimax_rate_bound(std::size_t n, double V, double sigma, double alpha, double C) {
  if (n < 2) throw InvalidArgument("minimax_rate_bound: n must be >= 2");
  require_sigma_alpha(sigma, alpha);
  if (!(C >= 0.0)) throw InvalidArgument("minimax_rate_bound: C must be >= 0");
  const double nn = static_cast<double>(n);
  return C * minimax_dominant_term(n, V, sigma) + (C + 24.0 * alpha) * sigma * sigma * std::log(nn) / nn;
}

double adaptive_bound(std::size_t n, std::size_t s1, std::size_t s2, double sigma, double alpha) {
  require_sigma_alpha(sigma, alpha);
  const std::size_t s = s1 + s2;
  if (s < 1 || s > n) {
    throw InvalidArgument("adaptive_bound: s1 + s2 = " + std::to_string(s) + " must lie in [1, " +
                          std::to_string(n) + "]");
  }
  const double nn = static_cast<double>(n);
  const double ss = static_cast<double>(s);
  const double var = sigma * sigma;
  return 12.0 * var * (ss / nn) * std::log(std::numbers::e * nn / ss) +
         48.0 * (alpha + 2.0) * var * ss * std::log(nn) / nn;
}

}  // namespace unireg
