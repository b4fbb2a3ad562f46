#include <atomic>
#include <cstdlib>
#include <string_view>

#include "xplain/kernels/kernels.hpp"

namespace xplain::kernels {
namespace {

Isa best_supported() noexcept {
  return cpu_supports(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

Isa initial_isa() noexcept {
  const char* env = std::getenv("XPLAIN_SIMD");
  if (env != nullptr) {
    const std::string_view v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && cpu_supports(Isa::Avx2)) return Isa::Avx2;
  }
  return best_supported();
}

std::atomic<const KernelTable*>& slot() noexcept {
  static std::atomic<const KernelTable*> current{&table_for(initial_isa())};
  return current;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "scalar";
}

bool cpu_supports(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(XPLAIN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Isa isa) noexcept {
#if defined(XPLAIN_HAVE_AVX2)
  if (isa == Isa::Avx2 && cpu_supports(Isa::Avx2)) return avx2::table();
#endif
  (void)isa;
  return scalar::table();
}

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

Isa set_isa(Isa isa) noexcept {
  const KernelTable& t = table_for(isa);
  slot().store(&t, std::memory_order_release);
  return t.isa;
}

}  // namespace xplain::kernels
