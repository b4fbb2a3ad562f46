#pragma once
// Population-level explanation search: minimize var(yhat | u, x_E) over
// |E| <= s, which is the same as maximizing I(x_E; yhat | u).

#include <string_view>

#include "xplain/gaussian_mi.hpp"

namespace xplain {

enum class SearchMethod { Exhaustive, Greedy };

std::string_view to_string(SearchMethod method) noexcept;

struct SearchResult {
  ExplanationSupport support;
  /// var(yhat | u, x_E) at `support`.
  double objective = 0.0;
  MiValue mi;
  SearchMethod method = SearchMethod::Exhaustive;
};

/// Global minimum over all subsets of size <= s. Objectives within
/// 1e-12 * var(yhat) are ties, resolved by smaller cardinality and then
/// lexicographic order. Throws DimensionTooLarge for n > 25.
SearchResult optimal_support_exhaustive(const JointMoments& moments, int s);

/// Forward selection: add the index with the largest variance decrease,
/// stopping once the best decrease is at most 1e-12 * var(yhat).
SearchResult optimal_support_greedy(const JointMoments& moments, int s);

/// {"method":..., "support":[...], "objective":..., "mi_nats":...}
std::string to_json(const SearchResult& result);

}  // namespace xplain
