#include "xplain/xml.hpp"

#include <string>

#include "xplain/error.hpp"
#include "xplain/subset_search.hpp"

namespace xplain {

std::string_view to_string(XmlMethod method) noexcept {
  switch (method) {
    case XmlMethod::L0Exhaustive: return "l0_exhaustive";
    case XmlMethod::Omp: return "omp";
    case XmlMethod::LassoPath: return "lasso_path";
  }
  return "l0_exhaustive";
}

XmlMethod parse_xml_method(std::string_view name) {
  if (name == "l0_exhaustive") return XmlMethod::L0Exhaustive;
  if (name == "omp") return XmlMethod::Omp;
  if (name == "lasso_path") return XmlMethod::LassoPath;
  throw Error(ErrorCode::InvalidArgument,
              "unknown method '" + std::string(name) + "' (expected l0_exhaustive, omp or lasso_path)");
}

XmlMethod default_xml_method(int n) noexcept {
  return n <= 15 ? XmlMethod::L0Exhaustive : XmlMethod::LassoPath;
}

XmlResult xml_fit(const SampleSet& samples, int s, XmlMethod method, const SolverConfig& config) {
  if (s < 0 || s > samples.n())
    throw Error(ErrorCode::InvalidArgument, "sparsity " + std::to_string(s) + " outside [0, " +
                                                std::to_string(samples.n()) + "]");
  XmlResult out;
  switch (method) {
    case XmlMethod::L0Exhaustive:
      out.fit = solve_l0(samples, s, L0Strategy::Exhaustive, config);
      break;
    case XmlMethod::Omp:
      out.fit = solve_l0(samples, s, L0Strategy::Omp, config);
      break;
    case XmlMethod::LassoPath: {
      LassoPathResult path = lasso_path_detailed(samples, s, config);
      out.fit = std::move(path.fit);
      out.path = std::move(path.path);
      break;
    }
  }
  out.support = ExplanationSupport(out.fit.support.indices(), s);
  return out;
}

ExplanationSupport xml_explain_population(const GaussianModel& model, int s) {
  return optimal_support_exhaustive(analytic_moments(model), s).support;
}

}  // namespace xplain
