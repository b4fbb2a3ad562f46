#pragma once
// Explanation selection from data: fit the prediction on the user summary and
// at most s features, report the support of the fitted coefficients.

#include <string_view>

#include "xplain/core_model.hpp"
#include "xplain/sparse_regression.hpp"

namespace xplain {

enum class XmlMethod { L0Exhaustive, Omp, LassoPath };

std::string_view to_string(XmlMethod method) noexcept;
/// Accepts "l0_exhaustive", "omp", "lasso_path"; throws InvalidArgument otherwise.
XmlMethod parse_xml_method(std::string_view name);

/// l0_exhaustive up to n = 15, lasso_path beyond.
XmlMethod default_xml_method(int n) noexcept;

struct XmlResult {
  ExplanationSupport support;
  SparseFit fit;
  /// Filled for LassoPath only.
  std::vector<PathPoint> path;
};

XmlResult xml_fit(const SampleSet& samples, int s, XmlMethod method, const SolverConfig& config = {});

inline ExplanationSupport xml_explain(const SampleSet& samples, int s, XmlMethod method,
                                      const SolverConfig& config = {}) {
  return xml_fit(samples, s, method, config).support;
}

/// Exhaustive population optimum on the model's analytic moments.
ExplanationSupport xml_explain_population(const GaussianModel& model, int s);

}  // namespace xplain
