#pragma once
// Empirical sparse regression of the prediction on the user summary and a few
// features:
//
//   minimize  sum_i (yhat_i - alpha * u_i - beta^T x_i)^2
//
// either with ||beta||_0 <= s (exhaustive or orthogonal matching pursuit) or
// with an added lambda * ||beta||_1 penalty (cyclic coordinate descent).
// alpha is always free and never penalized.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xplain/core_model.hpp"

namespace xplain {

struct SolverConfig {
  /// Coordinate descent stops when no coefficient moves more than this in a sweep.
  double tol = 1e-8;
  long max_sweeps = 100000;
  int path_points = 100;
  /// lambda_min / lambda_max for the path grid.
  double path_ratio = 1e-4;
  /// Scale feature columns to unit mean square inside the Lasso solver.
  /// Coefficients are reported on the original scale.
  bool standardize = false;
  /// Hold alpha at this value instead of fitting it.
  std::optional<double> fixed_alpha;
  /// Keep the penalized objective after every sweep (testing aid).
  bool record_history = false;
};

enum class FitMethod { LeastSquares, L0Exhaustive, Omp, Lasso };
enum class L0Strategy { Exhaustive, Omp };

std::string_view to_string(FitMethod method) noexcept;

struct SparseFit {
  double alpha = 0.0;
  Vector beta;
  /// {i : beta_i != 0}
  ExplanationSupport support;
  /// Residual sum of squares of the reported coefficients.
  double rss = 0.0;
  FitMethod method = FitMethod::LeastSquares;
  std::optional<double> lambda;
  bool converged = true;
  long sweeps = 0;
  std::vector<double> objective_history;
};

/// Unpenalized fit of alpha and beta restricted to `support`. Off-support
/// coefficients are exactly zero. Throws TooFewSamples unless m > |support| + 1.
SparseFit least_squares_on_support(const SampleSet& samples, const ExplanationSupport& support,
                                   std::optional<double> fixed_alpha = std::nullopt);

/// Best fit with at most s nonzero coefficients. Exhaustive enumeration picks
/// the minimum-rss support (relative ties within 1e-12 go to the smaller and
/// then lexicographically first support); throws DimensionTooLarge for n > 25.
SparseFit solve_l0(const SampleSet& samples, int s, L0Strategy strategy,
                   const SolverConfig& config = {});

/// 2 * max_j |x_j^T r| with r the residual of the alpha-only fit; the
/// smallest penalty for which beta = 0 is optimal.
double lambda_max(const SampleSet& samples, const SolverConfig& config = {});

/// Lasso by cyclic coordinate descent. Never throws on non-convergence: the
/// last iterate comes back with converged = false.
SparseFit solve_lasso(const SampleSet& samples, double lambda, const SolverConfig& config = {},
                      const SparseFit* warm_start = nullptr);

struct PathPoint {
  double lambda = 0.0;
  int support_size = 0;
  /// rss of the penalized (not debiased) fit
  double rss = 0.0;
  bool converged = true;
  /// Added by bisection between two grid points.
  bool refined = false;
};

struct LassoPathResult {
  /// Debiased fit on the selected support; lambda is the selected penalty.
  SparseFit fit;
  std::vector<PathPoint> path;
  std::size_t selected = 0;
};

/// Warm-started geometric lambda grid from lambda_max down to
/// lambda_max * path_ratio. Picks the largest lambda whose support size is
/// maximal subject to <= s, then refits least squares on that support.
LassoPathResult lasso_path_detailed(const SampleSet& samples, int s, const SolverConfig& config = {});

inline SparseFit lasso_path(const SampleSet& samples, int s, const SolverConfig& config = {}) {
  return lasso_path_detailed(samples, s, config).fit;
}

/// JSON object with method, lambda, 1-based support, alpha, nonzero betas,
/// rss and the converged flag.
std::string to_json(const SparseFit& fit);

}  // namespace xplain
