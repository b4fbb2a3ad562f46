#include "xplain/kernels/kernels.hpp"

namespace xplain::kernels::scalar {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void sub_scaled(const double* x, double alpha, const double* z, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - alpha * z[i];
}

constexpr KernelTable kTable{Isa::Scalar, &dot, &sum, &axpy, &sub_scaled};

}  // namespace

const KernelTable& table() noexcept { return kTable; }

}  // namespace xplain::kernels::scalar
