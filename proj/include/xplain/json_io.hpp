#pragma once
// JSON views of the result types, shared by the CLI and the experiment report.

#include <json.hpp>

#include "xplain/gaussian_mi.hpp"
#include "xplain/sparse_regression.hpp"
#include "xplain/subset_search.hpp"

namespace xplain {

using Json = nlohmann::ordered_json;

/// Number, or the string "inf" for the infinite flag.
Json json_value(const MiValue& mi);
/// 1-based index list.
Json json_value(const ExplanationSupport& support);
Json json_value(const SearchResult& result);
Json json_value(const SparseFit& fit);
Json json_value(const PathPoint& point);

}  // namespace xplain
