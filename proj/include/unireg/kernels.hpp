#pragma once

// Data-parallel inner loops used by the projection solvers, the risk lab and
// the segmentation DP. Each kernel has a scalar reference implementation and,
// on x86-64 builds, an AVX2 variant picked at runtime from CPUID.
//
// Elementwise kernels (axpy, segment_row_min) produce bit-identical results
// across backends. Reductions (dot, squared_distance) reassociate the sum and
// agree only to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace unireg::kernels {

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend b) noexcept;

struct Table {
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  // out[i] = x[i] + alpha * d[i]; out may alias x.
  void (*axpy)(double* out, const double* x, double alpha, const double* d, std::size_t n);
  // min over j in [j_begin, j_end) of prev[j] + cost(j, i), where cost is the
  // within-segment SSE of (j, i] computed from prefix sums:
  //   max(0, (sum_sq[i] - sum_sq[j]) - (sum[i] - sum[j])^2 / (i - j)).
  // Returns +inf for an empty range.
  double (*segment_row_min)(const double* sum, const double* sum_sq, const double* prev,
                            std::size_t i, std::size_t j_begin, std::size_t j_end);
};

bool available(Backend b) noexcept;

/// Backend used by the free functions below. Defaults to the best one the CPU
/// supports.
Backend active() noexcept;

/// Throws InvalidArgument if the backend is not available on this machine.
void set_active(Backend b);

const Table& table(Backend b);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double* out, const double* x, double alpha, const double* d, std::size_t n);
double segment_row_min(const double* sum, const double* sum_sq, const double* prev,
                       std::size_t i, std::size_t j_begin, std::size_t j_end);
}  // namespace scalar

#if defined(UNIREG_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double* out, const double* x, double alpha, const double* d, std::size_t n);
double segment_row_min(const double* sum, const double* sum_sq, const double* prev,
                       std::size_t i, std::size_t j_begin, std::size_t j_end);
}  // namespace avx2
#endif

// Span wrappers over the active backend. Lengths must match.
double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);
void axpy(std::span<double> out, std::span<const double> x, double alpha,
          std::span<const double> d);

/// Scalar within-segment SSE shared by every caller that must reproduce the
/// DP's arithmetic exactly.
inline double segment_cost(const double* sum, const double* sum_sq, std::size_t j,
                           std::size_t i) {
  const double s = sum[i] - sum[j];
  const double q = sum_sq[i] - sum_sq[j];
  const double len = static_cast<double>(i - j);
  const double c = q - (s * s) / len;
  return c > 0.0 ? c : 0.0;
}

}  // namespace unireg::kernels
