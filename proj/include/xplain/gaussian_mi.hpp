#pragma once
// Conditional variances and conditional mutual information I(e; yhat | u) for
// jointly Gaussian (x, yhat, u). For scalar yhat the information carried by
// an explanation E reduces to a log-ratio of two Schur complements:
//
//   I = 1/2 ln( var(yhat | u) / var(yhat | u, x_E) )

#include <optional>
#include <vector>

#include "xplain/core_model.hpp"

namespace xplain {

/// Enumeration limit for anything that visits every subset of features.
inline constexpr int kMaxEnumerationDim = 25;

struct MiValue {
  /// Natural-log units; +infinity when `infinite` is set.
  double nats = 0.0;
  /// The explanation determines yhat exactly (denominator at the floor).
  bool infinite = false;
  /// var(yhat | u)
  double numerator_var = 0.0;
  /// var(yhat | u, x_E)
  double denominator_var = 0.0;
};

/// var(yhat) - c G^+ c^T where G is the covariance of (u, x_E) and c the
/// cross-covariance with yhat. Clamped at zero.
double conditional_variance(const JointMoments& moments, const ExplanationSupport& support);

/// Default floor 1e-12 * var(yhat) (never below the smallest normal double).
double default_variance_floor(const JointMoments& moments);

/// Throws InvalidFloor when floor is given and not positive.
MiValue conditional_mi(const JointMoments& moments, const ExplanationSupport& support,
                       std::optional<double> floor = std::nullopt);

struct MiTableEntry {
  ExplanationSupport support;
  MiValue mi;
};

/// Every subset of size <= s, sorted by decreasing MI and then lexicographic
/// support. MI values within 1e-12 nats of each other compare equal.
/// Throws DimensionTooLarge for n > 25 and InvalidArgument for s outside [0, n].
std::vector<MiTableEntry> mi_table(const JointMoments& moments, int s);

/// CSV with header `support,mi_nats,cond_var`.
std::string mi_table_csv(const std::vector<MiTableEntry>& table);

namespace detail {

/// All subsets of {0..n-1} with exactly k elements, as bitmasks in
/// lexicographic order of their sorted index lists.
std::vector<std::uint32_t> combinations(int n, int k);

std::vector<int> mask_to_indices(std::uint32_t mask);

/// Integer sort key used for tie detection: value rounded to a multiple of
/// `quantum`.
long long quantize(double value, double quantum);

}  // namespace detail

}  // namespace xplain
