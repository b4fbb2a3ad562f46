#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace xplain {

/// Standard normal draws from the raw 64-bit stream of mt19937_64 using the
/// Marsaglia polar method. Unlike std::normal_distribution the output is fixed
/// by the seed on every standard library.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double a = 0.0;
    double b = 0.0;
    double r = 0.0;
    do {
      a = 2.0 * uniform() - 1.0;
      b = 2.0 * uniform() - 1.0;
      r = a * a + b * b;
    } while (r >= 1.0 || r == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(r) / r);
    spare_ = b * scale;
    has_spare_ = true;
    return a * scale;
  }

  /// 53 random mantissa bits -> [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace xplain
