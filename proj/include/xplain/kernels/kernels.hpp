#pragma once
// Dense double-precision inner loops shared by the moment, least-squares and
// coordinate-descent code. Every kernel has a scalar reference implementation
// and, on x86-64, an AVX2/FMA variant picked once at startup.
//
// The active variant can be forced with XPLAIN_SIMD=scalar|avx2|auto or with
// set_isa(). Results of the two variants agree to rounding, not bit-for-bit,
// because the vector variant reassociates sums.

#include <cstddef>
#include <span>
#include <string_view>

namespace xplain::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = x - alpha * z, written into out
  void (*sub_scaled)(const double* x, double alpha, const double* z, double* out,
                     std::size_t n);
};

namespace scalar {
const KernelTable& table() noexcept;
}

#if defined(XPLAIN_HAVE_AVX2)
namespace avx2 {
const KernelTable& table() noexcept;
}
#endif

bool cpu_supports(Isa isa) noexcept;

/// Table for a specific ISA; falls back to scalar when the CPU lacks it.
const KernelTable& table_for(Isa isa) noexcept;

/// Currently selected table.
const KernelTable& active() noexcept;

/// Overrides the selection for the whole process. Unsupported requests fall
/// back to scalar. Returns the ISA actually installed.
Isa set_isa(Isa isa) noexcept;

// Convenience wrappers over active().

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline double sum_squares(std::span<const double> a) {
  return active().dot(a.data(), a.data(), a.size());
}

inline double sum(std::span<const double> a) { return active().sum(a.data(), a.size()); }

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

}  // namespace xplain::kernels
