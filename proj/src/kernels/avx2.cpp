#include <immintrin.h>

#include <limits>

#include "unireg/kernels.hpp"

namespace unireg::kernels::avx2 {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmin(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_min_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_min_sd(m, _mm_unpackhi_pd(m, m)));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(d1, d1));
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void axpy(double* out, const double* x, double alpha, const double* d, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_mul_pd(va, _mm256_loadu_pd(d + i)));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = x[i] + alpha * d[i];
}

double segment_row_min(const double* sum, const double* sum_sq, const double* prev,
                       std::size_t i, std::size_t j_begin, std::size_t j_end) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t j = j_begin;
  if (j + 4 <= j_end) {
    const __m256d sum_i = _mm256_set1_pd(sum[i]);
    const __m256d sq_i = _mm256_set1_pd(sum_sq[i]);
    const __m256d end = _mm256_set1_pd(static_cast<double>(i));
    const __m256d zero = _mm256_setzero_pd();
    const __m256d four = _mm256_set1_pd(4.0);
    __m256d jv = _mm256_setr_pd(static_cast<double>(j), static_cast<double>(j + 1),
                                static_cast<double>(j + 2), static_cast<double>(j + 3));
    __m256d minv = _mm256_set1_pd(best);
    for (; j + 4 <= j_end; j += 4) {
      const __m256d s = _mm256_sub_pd(sum_i, _mm256_loadu_pd(sum + j));
      const __m256d q = _mm256_sub_pd(sq_i, _mm256_loadu_pd(sum_sq + j));
      const __m256d len = _mm256_sub_pd(end, jv);
      __m256d c = _mm256_sub_pd(q, _mm256_div_pd(_mm256_mul_pd(s, s), len));
      c = _mm256_max_pd(c, zero);
      minv = _mm256_min_pd(minv, _mm256_add_pd(_mm256_loadu_pd(prev + j), c));
      jv = _mm256_add_pd(jv, four);
    }
    best = hmin(minv);
  }
  for (; j < j_end; ++j) {
    const double v = prev[j] + segment_cost(sum, sum_sq, j, i);
    if (v < best) best = v;
  }
  return best;
}

}  // namespace unireg::kernels::avx2
