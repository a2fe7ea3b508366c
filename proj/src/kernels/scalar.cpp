#include <limits>

#include "unireg/kernels.hpp"

namespace unireg::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void axpy(double* out, const double* x, double alpha, const double* d, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + alpha * d[i];
}

double segment_row_min(const double* sum, const double* sum_sq, const double* prev,
                       std::size_t i, std::size_t j_begin, std::size_t j_end) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = j_begin; j < j_end; ++j) {
    const double v = prev[j] + segment_cost(sum, sum_sq, j, i);
    if (v < best) best = v;
  }
  return best;
}

}  // namespace unireg::kernels::scalar
