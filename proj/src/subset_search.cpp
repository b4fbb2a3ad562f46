#include "xplain/subset_search.hpp"

#include <algorithm>
#include <limits>

#include "xplain/error.hpp"
#include "xplain/json_io.hpp"
#include "xplain/parallel.hpp"

namespace xplain {
namespace {

void check_sparsity(int s, int n) {
  if (s < 0 || s > n)
    throw Error(ErrorCode::InvalidArgument,
                "sparsity " + std::to_string(s) + " outside [0, " + std::to_string(n) + "]");
}

struct Candidate {
  long long key = std::numeric_limits<long long>::max();
  std::size_t order = std::numeric_limits<std::size_t>::max();
  double objective = 0.0;
};

bool better(const Candidate& a, const Candidate& b) {
  return a.key != b.key ? a.key < b.key : a.order < b.order;
}

}  // namespace

std::string_view to_string(SearchMethod method) noexcept {
  return method == SearchMethod::Exhaustive ? "exhaustive" : "greedy";
}

SearchResult optimal_support_exhaustive(const JointMoments& moments, int s) {
  const int n = moments.n();
  if (n > kMaxEnumerationDim)
    throw Error(ErrorCode::DimensionTooLarge,
                "exhaustive search supports n <= 25, got n = " + std::to_string(n));
  check_sparsity(s, n);

  // Canonical order: by cardinality, then lexicographic. The first subset in
  // this order among the minimal quantized objectives wins.
  std::vector<std::uint32_t> masks;
  for (int k = 0; k <= s; ++k) {
    auto level = detail::combinations(n, k);
    masks.insert(masks.end(), level.begin(), level.end());
  }

  const double quantum = default_variance_floor(moments);
  const std::size_t blocks = std::max<std::size_t>(1, std::min<std::size_t>(masks.size(), 256));
  std::vector<Candidate> best(blocks);
  parallel::for_blocks(masks.size(), blocks, [&](std::size_t b, std::size_t begin, std::size_t end) {
    Candidate local;
    for (std::size_t i = begin; i < end; ++i) {
      const double obj =
          conditional_variance(moments, ExplanationSupport(detail::mask_to_indices(masks[i])));
      Candidate c{detail::quantize(obj, quantum), i, obj};
      if (better(c, local)) local = c;
    }
    best[b] = local;
  });

  Candidate winner;
  for (const auto& c : best)
    if (better(c, winner)) winner = c;

  SearchResult out;
  out.support = ExplanationSupport(detail::mask_to_indices(masks[winner.order]), s);
  out.objective = winner.objective;
  out.mi = conditional_mi(moments, out.support);
  out.method = SearchMethod::Exhaustive;
  return out;
}

SearchResult optimal_support_greedy(const JointMoments& moments, int s) {
  const int n = moments.n();
  check_sparsity(s, n);
  const double threshold = 1e-12 * moments.prediction_variance();

  std::vector<int> chosen;
  double current = conditional_variance(moments, ExplanationSupport{});
  while (static_cast<int>(chosen.size()) < s) {
    int best_index = -1;
    double best_value = current;
    for (int j = 0; j < n; ++j) {
      if (std::find(chosen.begin(), chosen.end(), j) != chosen.end()) continue;
      std::vector<int> trial = chosen;
      trial.insert(std::upper_bound(trial.begin(), trial.end(), j), j);
      const double value = conditional_variance(moments, ExplanationSupport(std::move(trial)));
      if (best_index < 0 || value < best_value) {
        best_index = j;
        best_value = value;
      }
    }
    if (best_index < 0 || current - best_value <= threshold) break;
    chosen.insert(std::upper_bound(chosen.begin(), chosen.end(), best_index), best_index);
    current = best_value;
  }

  SearchResult out;
  out.support = ExplanationSupport(std::move(chosen), s);
  out.objective = current;
  out.mi = conditional_mi(moments, out.support);
  out.method = SearchMethod::Greedy;
  return out;
}

std::string to_json(const SearchResult& result) { return json_value(result).dump(); }

}  // namespace xplain
