#include "xplain/gaussian_mi.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdio>
#include <limits>

#include "xplain/error.hpp"
#include "xplain/parallel.hpp"

namespace xplain {

namespace detail {

std::vector<std::uint32_t> combinations(int n, int k) {
  std::vector<std::uint32_t> out;
  if (k < 0 || k > n) return out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    std::uint32_t mask = 0;
    for (int i : idx) mask |= (1u << i);
    out.push_back(mask);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::vector<int> mask_to_indices(std::uint32_t mask) {
  std::vector<int> out;
  for (int i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

long long quantize(double value, double quantum) {
  if (std::isinf(value)) return value > 0 ? LLONG_MAX : LLONG_MIN;
  return std::llround(value / quantum);
}

}  // namespace detail

double conditional_variance(const JointMoments& moments, const ExplanationSupport& support) {
  const int n = moments.n();
  support.check_range(n);
  const Matrix& sigma = moments.sigma();
  const int y = moments.prediction_index();

  std::vector<int> cond;
  cond.reserve(support.size() + 1);
  cond.push_back(moments.summary_index());
  cond.insert(cond.end(), support.indices().begin(), support.indices().end());

  const Matrix g = sigma(cond, cond);
  const Vector c = sigma(cond, y);
  const double explained = c.dot(linalg::symmetric_pinv(g) * c);
  return std::max(sigma(y, y) - explained, 0.0);
}

double default_variance_floor(const JointMoments& moments) {
  return std::max(1e-12 * moments.prediction_variance(), std::numeric_limits<double>::min());
}

MiValue conditional_mi(const JointMoments& moments, const ExplanationSupport& support,
                       std::optional<double> floor) {
  if (floor && !(*floor > 0.0))
    throw Error(ErrorCode::InvalidFloor, "variance floor must be positive");
  const double f = floor ? *floor : default_variance_floor(moments);

  MiValue out;
  out.numerator_var = conditional_variance(moments, ExplanationSupport{});
  out.denominator_var =
      support.empty() ? out.numerator_var : conditional_variance(moments, support);

  if (support.empty() || out.numerator_var <= f) return out;  // u already pins down yhat
  if (out.denominator_var <= f) {
    out.infinite = true;
    out.nats = std::numeric_limits<double>::infinity();
    return out;
  }
  out.nats = std::max(0.5 * std::log(out.numerator_var / out.denominator_var), 0.0);
  return out;
}

std::vector<MiTableEntry> mi_table(const JointMoments& moments, int s) {
  const int n = moments.n();
  if (n > kMaxEnumerationDim)
    throw Error(ErrorCode::DimensionTooLarge,
                "subset enumeration supports n <= 25, got n = " + std::to_string(n));
  if (s < 0 || s > n)
    throw Error(ErrorCode::InvalidArgument, "sparsity must lie in [0, n]");

  std::vector<std::uint32_t> masks;
  for (int k = 0; k <= s; ++k) {
    auto level = detail::combinations(n, k);
    masks.insert(masks.end(), level.begin(), level.end());
  }

  const double floor = default_variance_floor(moments);
  std::vector<MiTableEntry> table(masks.size());
  parallel::for_blocks(masks.size(), parallel::thread_count() * 4,
                       [&](std::size_t, std::size_t begin, std::size_t end) {
                         for (std::size_t i = begin; i < end; ++i) {
                           ExplanationSupport e(detail::mask_to_indices(masks[i]), s);
                           table[i].mi = conditional_mi(moments, e, floor);
                           table[i].support = std::move(e);
                         }
                       });

  std::sort(table.begin(), table.end(), [](const MiTableEntry& a, const MiTableEntry& b) {
    const long long ka = detail::quantize(a.mi.nats, 1e-12);
    const long long kb = detail::quantize(b.mi.nats, 1e-12);
    if (ka != kb) return ka > kb;
    return a.support < b.support;
  });
  return table;
}

std::string mi_table_csv(const std::vector<MiTableEntry>& table) {
  std::string out = "support,mi_nats,cond_var\n";
  char buf[64];
  for (const auto& entry : table) {
    out += entry.support.to_cell();
    out += ',';
    if (entry.mi.infinite) {
      out += "inf";
    } else {
      std::snprintf(buf, sizeof buf, "%.17g", entry.mi.nats);
      out += buf;
    }
    out += ',';
    std::snprintf(buf, sizeof buf, "%.17g", entry.mi.denominator_var);
    out += buf;
    out += '\n';
  }
  return out;
}

}  // namespace xplain
