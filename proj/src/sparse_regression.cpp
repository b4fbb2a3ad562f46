#include "xplain/sparse_regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "xplain/error.hpp"
#include "xplain/gaussian_mi.hpp"
#include "xplain/json_io.hpp"
#include "xplain/kernels/kernels.hpp"
#include "xplain/parallel.hpp"

namespace xplain {
namespace {

const double* column(const SampleSet& samples, int j) {
  return samples.features().data() + static_cast<std::ptrdiff_t>(j) * samples.m();
}

// Regression target after removing a fixed alpha * u, if any.
Vector target(const SampleSet& samples, std::optional<double> fixed_alpha) {
  if (!fixed_alpha) return samples.predictions();
  Vector y(samples.m());
  kernels::active().sub_scaled(samples.predictions().data(), *fixed_alpha,
                               samples.summaries().data(), y.data(), samples.m());
  return y;
}

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

ExplanationSupport nonzero_support(const Vector& beta) {
  std::vector<int> idx;
  for (Eigen::Index i = 0; i < beta.size(); ++i)
    if (beta[i] != 0.0) idx.push_back(static_cast<int>(i));
  return ExplanationSupport(std::move(idx));
}

// r = y - alpha u - X beta, then returns r^T r.
double residual(const SampleSet& samples, double alpha, const Vector& beta, Vector& r) {
  const auto& k = kernels::active();
  const int m = samples.m();
  r.resize(m);
  k.sub_scaled(samples.predictions().data(), alpha, samples.summaries().data(), r.data(), m);
  for (int j = 0; j < samples.n(); ++j)
    if (beta[j] != 0.0) k.axpy(-beta[j], column(samples, j), r.data(), m);
  return k.dot(r.data(), r.data(), m);
}

void check_sparsity(int s, int n) {
  if (s < 0 || s > n)
    throw Error(ErrorCode::InvalidArgument,
                "sparsity " + std::to_string(s) + " outside [0, " + std::to_string(n) + "]");
}

// Gram matrix of the columns (u, x_1..x_n) and their correlations with y.
struct Moments {
  Matrix gram;
  Vector cross;
  double yty = 0.0;
};

Moments design_moments(const SampleSet& samples, const Vector& y, bool with_u) {
  const auto& k = kernels::active();
  const int m = samples.m();
  const int n = samples.n();
  const int off = with_u ? 1 : 0;
  std::vector<const double*> cols;
  if (with_u) cols.push_back(samples.summaries().data());
  for (int j = 0; j < n; ++j) cols.push_back(column(samples, j));

  Moments out;
  const int d = n + off;
  out.gram.resize(d, d);
  out.cross.resize(d);
  for (int a = 0; a < d; ++a) {
    out.cross[a] = k.dot(cols[a], y.data(), m);
    for (int b = a; b < d; ++b) out.gram(a, b) = out.gram(b, a) = k.dot(cols[a], cols[b], m);
  }
  out.yty = k.dot(y.data(), y.data(), m);
  return out;
}

}  // namespace

std::string_view to_string(FitMethod method) noexcept {
  switch (method) {
    case FitMethod::LeastSquares: return "least_squares";
    case FitMethod::L0Exhaustive: return "l0_exhaustive";
    case FitMethod::Omp: return "omp";
    case FitMethod::Lasso: return "lasso";
  }
  return "least_squares";
}

SparseFit least_squares_on_support(const SampleSet& samples, const ExplanationSupport& support,
                                   std::optional<double> fixed_alpha) {
  const int m = samples.m();
  const int n = samples.n();
  support.check_range(n);
  const int k = static_cast<int>(support.size());
  if (m <= k + 1)
    throw Error(ErrorCode::TooFewSamples, "least squares on " + std::to_string(k) +
                                              " features needs m > " + std::to_string(k + 1) +
                                              ", got m = " + std::to_string(m));

  const bool with_u = !fixed_alpha.has_value();
  const Vector y = target(samples, fixed_alpha);
  std::vector<const double*> cols;
  if (with_u) cols.push_back(samples.summaries().data());
  for (int j : support.indices()) cols.push_back(column(samples, j));

  const auto& kt = kernels::active();
  const int d = static_cast<int>(cols.size());
  Matrix gram(d, d);
  Vector cross(d);
  for (int a = 0; a < d; ++a) {
    cross[a] = kt.dot(cols[a], y.data(), m);
    for (int b = a; b < d; ++b) gram(a, b) = gram(b, a) = kt.dot(cols[a], cols[b], m);
  }
  const Vector coef = linalg::solve_symmetric(gram, cross);

  SparseFit fit;
  fit.method = FitMethod::LeastSquares;
  fit.alpha = with_u ? coef[0] : *fixed_alpha;
  fit.beta = Vector::Zero(n);
  for (int i = 0; i < k; ++i) fit.beta[support.indices()[i]] = coef[i + (with_u ? 1 : 0)];
  Vector r;
  fit.rss = residual(samples, fit.alpha, fit.beta, r);
  fit.support = nonzero_support(fit.beta);
  return fit;
}

namespace {

SparseFit l0_exhaustive(const SampleSet& samples, int s, const SolverConfig& config) {
  const int n = samples.n();
  if (n > kMaxEnumerationDim)
    throw Error(ErrorCode::DimensionTooLarge,
                "exhaustive L0 supports n <= 25, got n = " + std::to_string(n) +
                    "; use omp or lasso_path");
  const bool with_u = !config.fixed_alpha.has_value();
  const int off = with_u ? 1 : 0;
  const Vector y = target(samples, config.fixed_alpha);
  const Moments mom = design_moments(samples, y, with_u);

  std::vector<std::uint32_t> masks;
  for (int k = 0; k <= s; ++k) {
    auto level = detail::combinations(n, k);
    masks.insert(masks.end(), level.begin(), level.end());
  }

  // rss(E) = y^T y - h^T G^+ h on the sub-Gram of (u, x_E).
  const double quantum = std::max(1e-12 * mom.yty, std::numeric_limits<double>::min());
  struct Best {
    long long key = std::numeric_limits<long long>::max();
    std::size_t order = std::numeric_limits<std::size_t>::max();
  };
  auto better = [](const Best& a, const Best& b) {
    return a.key != b.key ? a.key < b.key : a.order < b.order;
  };
  const std::size_t blocks = std::max<std::size_t>(1, std::min<std::size_t>(masks.size(), 256));
  std::vector<Best> best(blocks);
  parallel::for_blocks(masks.size(), blocks, [&](std::size_t b, std::size_t begin, std::size_t end) {
    Best local;
    for (std::size_t i = begin; i < end; ++i) {
      std::vector<int> idx;
      if (with_u) idx.push_back(0);
      for (int j : detail::mask_to_indices(masks[i])) idx.push_back(j + off);
      double rss = mom.yty;
      if (!idx.empty()) {
        const Matrix g = mom.gram(idx, idx);
        const Vector h = mom.cross(idx);
        rss -= h.dot(linalg::solve_symmetric(g, h));
      }
      Best c{detail::quantize(std::max(rss, 0.0), quantum), i};
      if (better(c, local)) local = c;
    }
    best[b] = local;
  });
  Best winner;
  for (const auto& c : best)
    if (better(c, winner)) winner = c;

  SparseFit fit = least_squares_on_support(
      samples, ExplanationSupport(detail::mask_to_indices(masks[winner.order])),
      config.fixed_alpha);
  fit.method = FitMethod::L0Exhaustive;
  return fit;
}

SparseFit omp(const SampleSet& samples, int s, const SolverConfig& config) {
  const auto& k = kernels::active();
  const int m = samples.m();
  const int n = samples.n();
  Vector norms(n);
  for (int j = 0; j < n; ++j) norms[j] = std::sqrt(k.dot(column(samples, j), column(samples, j), m));
  const Vector y = target(samples, config.fixed_alpha);
  const double scale = std::sqrt(k.dot(y.data(), y.data(), m));

  std::vector<int> chosen;
  SparseFit fit = least_squares_on_support(samples, ExplanationSupport{}, config.fixed_alpha);
  Vector r;
  residual(samples, fit.alpha, fit.beta, r);
  while (static_cast<int>(chosen.size()) < s) {
    int pick = -1;
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
      if (norms[j] == 0.0 || std::binary_search(chosen.begin(), chosen.end(), j)) continue;
      const double c = std::abs(k.dot(column(samples, j), r.data(), m)) / norms[j];
      if (c > best) {
        best = c;
        pick = j;
      }
    }
    if (pick < 0 || best <= 1e-10 * scale) break;
    chosen.insert(std::upper_bound(chosen.begin(), chosen.end(), pick), pick);
    fit = least_squares_on_support(samples, ExplanationSupport(chosen), config.fixed_alpha);
    residual(samples, fit.alpha, fit.beta, r);
  }
  fit.method = FitMethod::Omp;
  return fit;
}

// Column scales for the standardize option: root mean square, 1 for zero columns.
Vector column_scales(const SampleSet& samples) {
  const auto& k = kernels::active();
  Vector d(samples.n());
  for (int j = 0; j < samples.n(); ++j) {
    const double ms = k.dot(column(samples, j), column(samples, j), samples.m()) / samples.m();
    d[j] = ms > 0.0 ? std::sqrt(ms) : 1.0;
  }
  return d;
}

SampleSet rescaled(const SampleSet& samples, const Vector& scales) {
  Matrix x = samples.features() * scales.cwiseInverse().asDiagonal();
  return SampleSet(std::move(x), samples.predictions(), samples.summaries());
}

// Exact minimizer on the face fixed by the converged signs: solve the
// stationarity equations for (alpha, beta_A) with sign(beta_A) held fixed.
// Kept only if it reproduces those signs, satisfies the inactive KKT bounds
// and does not raise the objective. Coordinate descent stops on the size of
// its last step, which can sit well away from the optimum on collinear designs.
void polish(const SampleSet& samples, double lambda, const SolverConfig& config, SparseFit& fit) {
  const auto& k = kernels::active();
  const int m = samples.m();
  const int n = samples.n();
  const double half = 0.5 * lambda;
  const double* u = samples.summaries().data();
  const bool with_u = !config.fixed_alpha && k.dot(u, u, m) > 0.0;
  const std::vector<int>& active = fit.support.indices();
  const int off = with_u ? 1 : 0;
  const int d = static_cast<int>(active.size()) + off;
  if (d == 0) return;

  Vector y(m);
  k.sub_scaled(samples.predictions().data(), with_u ? 0.0 : fit.alpha, u, y.data(), m);
  std::vector<const double*> cols;
  if (with_u) cols.push_back(u);
  for (int j : active) cols.push_back(column(samples, j));
  Matrix gram(d, d);
  Vector rhs(d);
  for (int a = 0; a < d; ++a) {
    rhs[a] = k.dot(cols[a], y.data(), m);
    if (a >= off) rhs[a] -= half * (fit.beta[active[a - off]] > 0.0 ? 1.0 : -1.0);
    for (int b = a; b < d; ++b) gram(a, b) = gram(b, a) = k.dot(cols[a], cols[b], m);
  }
  const Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) return;
  const Vector coef = llt.solve(rhs);
  if (!coef.allFinite()) return;

  Vector beta = Vector::Zero(n);
  for (int i = 0; i < d - off; ++i) {
    const int j = active[i];
    if ((coef[i + off] > 0.0) != (fit.beta[j] > 0.0) || coef[i + off] == 0.0) return;
    beta[j] = coef[i + off];
  }
  const double alpha = with_u ? coef[0] : fit.alpha;

  Vector r_old, r_new;
  const double before = residual(samples, fit.alpha, fit.beta, r_old) + lambda * fit.beta.lpNorm<1>();
  const double rss = residual(samples, alpha, beta, r_new);
  const double after = rss + lambda * beta.lpNorm<1>();
  if (after > before + 1e-12 * std::max(before, 1.0)) return;
  const double yy = k.dot(y.data(), y.data(), m);
  for (int j = 0; j < n; ++j) {
    if (beta[j] != 0.0) continue;
    const double* xj = column(samples, j);
    const double bound = half * (1.0 + 1e-9) + 1e-12 * std::sqrt(k.dot(xj, xj, m) * yy);
    if (std::abs(k.dot(xj, r_new.data(), m)) > bound) return;
  }
  fit.alpha = alpha;
  fit.beta = beta;
  fit.rss = rss;
}

SparseFit lasso_cd(const SampleSet& samples, double lambda, const SolverConfig& config,
                   const SparseFit* warm) {
  const auto& k = kernels::active();
  const int m = samples.m();
  const int n = samples.n();
  const double* u = samples.summaries().data();

  Vector norms2(n);
  for (int j = 0; j < n; ++j) norms2[j] = k.dot(column(samples, j), column(samples, j), m);
  const double unorm2 = k.dot(u, u, m);
  const double half = 0.5 * lambda;

  SparseFit fit;
  fit.method = FitMethod::Lasso;
  fit.lambda = lambda;
  fit.alpha = config.fixed_alpha ? *config.fixed_alpha : (warm ? warm->alpha : 0.0);
  fit.beta = warm ? warm->beta : Vector::Zero(n);
  for (int j = 0; j < n; ++j)
    if (norms2[j] == 0.0) fit.beta[j] = 0.0;

  Vector r;
  residual(samples, fit.alpha, fit.beta, r);
  fit.converged = false;
  for (long sweep = 1; sweep <= config.max_sweeps; ++sweep) {
    double max_change = 0.0;
    if (!config.fixed_alpha && unorm2 > 0.0) {
      const double delta = k.dot(u, r.data(), m) / unorm2;
      if (delta != 0.0) {
        fit.alpha += delta;
        k.axpy(-delta, u, r.data(), m);
        max_change = std::abs(delta);
      }
    }
    for (int j = 0; j < n; ++j) {
      if (norms2[j] == 0.0) continue;
      const double* xj = column(samples, j);
      const double rho = k.dot(xj, r.data(), m) + norms2[j] * fit.beta[j];
      const double updated = soft_threshold(rho, half) / norms2[j];
      const double delta = updated - fit.beta[j];
      if (delta != 0.0) {
        k.axpy(-delta, xj, r.data(), m);
        fit.beta[j] = updated;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    fit.sweeps = sweep;
    if (config.record_history)
      fit.objective_history.push_back(k.dot(r.data(), r.data(), m) + lambda * fit.beta.lpNorm<1>());
    if (max_change < config.tol) {
      fit.converged = true;
      break;
    }
  }
  fit.rss = residual(samples, fit.alpha, fit.beta, r);
  fit.support = nonzero_support(fit.beta);
  if (fit.converged) polish(samples, lambda, config, fit);
  return fit;
}

}  // namespace

SparseFit solve_l0(const SampleSet& samples, int s, L0Strategy strategy, const SolverConfig& config) {
  check_sparsity(s, samples.n());
  if (samples.m() <= s + 1)
    throw Error(ErrorCode::TooFewSamples, "L0 fit with s = " + std::to_string(s) +
                                              " needs m > " + std::to_string(s + 1));
  return strategy == L0Strategy::Exhaustive ? l0_exhaustive(samples, s, config)
                                            : omp(samples, s, config);
}

double lambda_max(const SampleSet& samples, const SolverConfig& config) {
  const auto& k = kernels::active();
  const int m = samples.m();
  const SampleSet* data = &samples;
  std::optional<SampleSet> scaled;
  if (config.standardize) data = &scaled.emplace(rescaled(samples, column_scales(samples)));

  double alpha = 0.0;
  const double* u = data->summaries().data();
  if (config.fixed_alpha) {
    alpha = *config.fixed_alpha;
  } else {
    const double unorm2 = k.dot(u, u, m);
    if (unorm2 > 0.0) alpha = k.dot(u, data->predictions().data(), m) / unorm2;
  }
  Vector r(m);
  k.sub_scaled(data->predictions().data(), alpha, u, r.data(), m);
  double best = 0.0;
  for (int j = 0; j < data->n(); ++j) best = std::max(best, std::abs(k.dot(column(*data, j), r.data(), m)));
  return 2.0 * best;
}

SparseFit solve_lasso(const SampleSet& samples, double lambda, const SolverConfig& config,
                      const SparseFit* warm_start) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::InvalidArgument, "lambda must be a finite nonnegative number");
  if (warm_start && warm_start->beta.size() != samples.n())
    throw Error(ErrorCode::DimensionMismatch, "warm start has the wrong number of coefficients");

  // Zero is optimal from lambda_max up. Answer it directly so that round-off
  // in the sweeps cannot leave 1e-16 coefficients behind.
  if (lambda > 0.0 && lambda >= lambda_max(samples, config)) {
    SparseFit fit;
    fit.method = FitMethod::Lasso;
    fit.lambda = lambda;
    fit.beta = Vector::Zero(samples.n());
    if (config.fixed_alpha) {
      fit.alpha = *config.fixed_alpha;
    } else {
      const Vector& u = samples.summaries();
      const double unorm2 = kernels::active().dot(u.data(), u.data(), samples.m());
      if (unorm2 > 0.0) fit.alpha = kernels::active().dot(u.data(), samples.predictions().data(), samples.m()) / unorm2;
    }
    Vector r;
    fit.rss = residual(samples, fit.alpha, fit.beta, r);
    if (config.record_history) fit.objective_history.push_back(fit.rss);
    return fit;
  }
  if (!config.standardize) return lasso_cd(samples, lambda, config, warm_start);

  const Vector scales = column_scales(samples);
  const SampleSet scaled = rescaled(samples, scales);
  std::optional<SparseFit> warm;
  if (warm_start) {
    warm = *warm_start;
    warm->beta = warm->beta.cwiseProduct(scales);
  }
  SparseFit fit = lasso_cd(scaled, lambda, config, warm ? &*warm : nullptr);
  fit.beta = fit.beta.cwiseQuotient(scales);
  Vector r;
  fit.rss = residual(samples, fit.alpha, fit.beta, r);
  fit.support = nonzero_support(fit.beta);
  return fit;
}

LassoPathResult lasso_path_detailed(const SampleSet& samples, int s, const SolverConfig& config) {
  const int n = samples.n();
  if (s < 0) throw Error(ErrorCode::InvalidArgument, "sparsity must be >= 0");
  if (config.path_points < 1) throw Error(ErrorCode::InvalidArgument, "path needs >= 1 point");
  if (!(config.path_ratio > 0.0 && config.path_ratio < 1.0))
    throw Error(ErrorCode::InvalidArgument, "path ratio must lie in (0, 1)");
  s = std::min(s, n);

  const auto& k = kernels::active();
  const int m = samples.m();
  const double top = lambda_max(samples, config);
  const Vector y = target(samples, config.fixed_alpha);
  double max_norm = 0.0;
  for (int j = 0; j < n; ++j)
    max_norm = std::max(max_norm, std::sqrt(k.dot(column(samples, j), column(samples, j), m)));

  LassoPathResult out;
  // Correlations at round-off level mean u already explains the prediction.
  const double scale = 2.0 * std::sqrt(k.dot(y.data(), y.data(), m)) * max_norm;
  if (!(top > 1e-10 * scale)) {
    out.fit = least_squares_on_support(samples, ExplanationSupport{}, config.fixed_alpha);
    out.fit.method = FitMethod::Lasso;
    out.fit.lambda = top;
    out.path.push_back({top, 0, out.fit.rss, true, false});
    out.selected = 0;
    return out;
  }

  std::vector<SparseFit> fits;
  const int points = config.path_points;
  for (int p = 0; p < points; ++p) {
    const double lambda =
        points == 1 ? top : top * std::pow(config.path_ratio, static_cast<double>(p) / (points - 1));
    fits.push_back(solve_lasso(samples, lambda, config, fits.empty() ? nullptr : &fits.back()));
    const SparseFit& f = fits.back();
    out.path.push_back({lambda, static_cast<int>(f.support.size()), f.rss, f.converged, false});
  }

  auto pick = [&]() {
    std::size_t sel = 0;
    int size = -1;
    for (std::size_t p = 0; p < out.path.size(); ++p) {
      const PathPoint& pt = out.path[p];
      if (pt.support_size > s) continue;
      if (pt.support_size > size || (pt.support_size == size && pt.lambda > out.path[sel].lambda)) {
        sel = p;
        size = pt.support_size;
      }
    }
    return sel;
  };
  // When two features enter between neighbouring grid points the budget can
  // be skipped over; bisect that gap in log-lambda.
  std::size_t jump = 0;
  while (jump < out.path.size() && out.path[jump].support_size <= s) ++jump;
  if (jump > 0 && jump < out.path.size() && out.path[jump - 1].support_size < s) {
    double upper = out.path[jump - 1].lambda;
    double lower = out.path[jump].lambda;
    SparseFit warm = fits[jump - 1];
    for (int it = 0; it < 40; ++it) {
      const double mid = std::sqrt(upper * lower);
      SparseFit f = solve_lasso(samples, mid, config, &warm);
      const int size = static_cast<int>(f.support.size());
      out.path.push_back({mid, size, f.rss, f.converged, true});
      fits.push_back(std::move(f));
      if (size > s) {
        lower = mid;
      } else {
        upper = mid;
        warm = fits.back();
        if (size == s) break;
      }
    }
    // keep the reported path ordered by decreasing lambda
    std::vector<std::size_t> order(out.path.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return out.path[a].lambda > out.path[b].lambda; });
    std::vector<PathPoint> path;
    std::vector<SparseFit> sorted;
    for (std::size_t i : order) {
      path.push_back(out.path[i]);
      sorted.push_back(std::move(fits[i]));
    }
    out.path = std::move(path);
    fits = std::move(sorted);
  }
  const std::size_t sel = pick();

  out.selected = sel;
  const SparseFit& chosen = fits[sel];
  out.fit = least_squares_on_support(samples, chosen.support, config.fixed_alpha);
  out.fit.method = FitMethod::Lasso;
  out.fit.lambda = chosen.lambda;
  out.fit.converged = chosen.converged;
  out.fit.sweeps = chosen.sweeps;
  return out;
}

std::string to_json(const SparseFit& fit) { return json_value(fit).dump(); }

}  // namespace xplain
