#include "xplain/json_io.hpp"

namespace xplain {

Json json_value(const MiValue& mi) {
  if (mi.infinite) return "inf";
  return mi.nats;
}

Json json_value(const ExplanationSupport& support) { return support.one_based(); }

Json json_value(const SearchResult& result) {
  Json j;
  j["method"] = to_string(result.method);
  j["support"] = json_value(result.support);
  j["objective"] = result.objective;
  j["mi_nats"] = json_value(result.mi);
  return j;
}

Json json_value(const SparseFit& fit) {
  Json j;
  j["method"] = to_string(fit.method);
  if (fit.lambda)
    j["lambda"] = *fit.lambda;
  else
    j["lambda"] = nullptr;
  j["support"] = json_value(fit.support);
  j["alpha"] = fit.alpha;
  Json betas = Json::array();
  for (int i : fit.support.indices()) betas.push_back({{"index", i + 1}, {"value", fit.beta[i]}});
  j["beta"] = std::move(betas);
  j["rss"] = fit.rss;
  j["converged"] = fit.converged;
  return j;
}

Json json_value(const PathPoint& point) {
  Json j;
  j["lambda"] = point.lambda;
  j["support_size"] = point.support_size;
  j["rss"] = point.rss;
  j["converged"] = point.converged;
  j["refined"] = point.refined;
  return j;
}

}  // namespace xplain
