#include <atomic>
#include <cmath>
#include <string>

#include "unireg/errors.hpp"
#include "unireg/kernels.hpp"

namespace unireg::kernels {
namespace {

constexpr Table kScalar{&scalar::dot, &scalar::squared_distance, &scalar::axpy,
                        &scalar::segment_row_min};

#if defined(UNIREG_HAVE_AVX2)
constexpr Table kAvx2{&avx2::dot, &avx2::squared_distance, &avx2::axpy, &avx2::segment_row_min};
#endif

bool cpu_has_avx2() noexcept {
#if defined(UNIREG_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend best_backend() noexcept { return cpu_has_avx2() ? Backend::avx2 : Backend::scalar; }

std::atomic<Backend>& active_slot() {
  static std::atomic<Backend> slot{best_backend()};
  return slot;
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw InvalidArgument("kernel operands have different lengths");
}

}  // namespace

std::string_view to_string(Backend b) noexcept {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

bool available(Backend b) noexcept { return b == Backend::scalar || cpu_has_avx2(); }

Backend active() noexcept { return active_slot().load(std::memory_order_relaxed); }

void set_active(Backend b) {
  if (!available(b)) {
    throw InvalidArgument("kernel backend '" + std::string(to_string(b)) +
                          "' is not available on this CPU/build");
  }
  active_slot().store(b, std::memory_order_relaxed);
}

const Table& table(Backend b) {
#if defined(UNIREG_HAVE_AVX2)
  if (b == Backend::avx2) {
    if (!available(b)) throw InvalidArgument("avx2 kernels not available on this CPU");
    return kAvx2;
  }
#else
  if (b == Backend::avx2) throw InvalidArgument("avx2 kernels not compiled in");
#endif
  return kScalar;
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_lengths(a.size(), b.size());
  return table(active()).dot(a.data(), b.data(), a.size());
}

double squared_norm(std::span<const double> a) {
  return table(active()).dot(a.data(), a.data(), a.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  check_lengths(a.size(), b.size());
  return table(active()).squared_distance(a.data(), b.data(), a.size());
}

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

void axpy(std::span<double> out, std::span<const double> x, double alpha,
          std::span<const double> d) {
  check_lengths(out.size(), x.size());
  check_lengths(x.size(), d.size());
  table(active()).axpy(out.data(), x.data(), alpha, d.data(), x.size());
}

}  // namespace unireg::kernels
