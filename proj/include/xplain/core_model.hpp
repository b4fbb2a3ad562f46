#pragma once
// Probabilistic setup: Gaussian features x ~ N(0, C_x), a linear prediction
// yhat = w^T x and a linear user summary u = v^T x, plus the empirical
// counterpart (a sample set) and the joint second-moment matrix that every
// variance and information computation works from.

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "xplain/linalg.hpp"

namespace xplain {

/// Slack used for the symmetry and PSD checks on user-supplied covariances.
inline constexpr double kCovarianceSlack = 1e-10;

class GaussianModel {
 public:
  int n() const noexcept { return static_cast<int>(w_.size()); }
  const Matrix& cov_x() const noexcept { return cov_x_; }
  const Vector& w() const noexcept { return w_; }
  const Vector& v() const noexcept { return v_; }

 private:
  friend GaussianModel build_gaussian_model(Matrix cov_x, Vector w, Vector v);
  GaussianModel(Matrix cov_x, Vector w, Vector v)
      : cov_x_(std::move(cov_x)), w_(std::move(w)), v_(std::move(v)) {}

  Matrix cov_x_;
  Vector w_;
  Vector v_;
};

/// Validates and wraps a model. Throws DimensionMismatch on shape errors and
/// NotPositiveSemidefinite when cov_x is asymmetric or indefinite beyond slack.
GaussianModel build_gaussian_model(Matrix cov_x, Vector w, Vector v);

/// m rows of (x, yhat, u). Features are stored column-major so each feature
/// column is contiguous.
class SampleSet {
 public:
  /// Throws InvalidCount for m == 0, DimensionMismatch for n == 0 or
  /// disagreeing lengths, InvalidArgument for non-finite entries.
  SampleSet(Matrix features, Vector predictions, Vector summaries);

  int m() const noexcept { return static_cast<int>(features_.rows()); }
  int n() const noexcept { return static_cast<int>(features_.cols()); }
  const Matrix& features() const noexcept { return features_; }
  const Vector& predictions() const noexcept { return predictions_; }
  const Vector& summaries() const noexcept { return summaries_; }

 private:
  Matrix features_;
  Vector predictions_;
  Vector summaries_;
};

enum class MomentSource { Analytic, Empirical };

/// Covariance of the stacked vector (x_1..x_n, yhat, u).
class JointMoments {
 public:
  JointMoments(Matrix sigma, MomentSource source, int sample_count = 0);

  int n() const noexcept { return static_cast<int>(sigma_.rows()) - 2; }
  const Matrix& sigma() const noexcept { return sigma_; }
  MomentSource source() const noexcept { return source_; }
  /// Number of samples behind an empirical estimate, 0 for analytic moments.
  int sample_count() const noexcept { return sample_count_; }

  int prediction_index() const noexcept { return n(); }
  int summary_index() const noexcept { return n() + 1; }
  double prediction_variance() const { return sigma_(n(), n()); }

 private:
  Matrix sigma_;
  MomentSource source_;
  int sample_count_;
};

/// Feature index set E. Stored 0-based; serialized 1-based.
class ExplanationSupport {
 public:
  ExplanationSupport() = default;
  /// Budget defaults to indices.size().
  explicit ExplanationSupport(std::vector<int> indices);
  /// Throws InvalidArgument unless indices are strictly increasing,
  /// nonnegative and no more than `budget`.
  ExplanationSupport(std::vector<int> indices, int budget);

  static ExplanationSupport from_one_based(const std::vector<int>& indices, int budget);

  const std::vector<int>& indices() const noexcept { return indices_; }
  std::vector<int> one_based() const;
  int budget() const noexcept { return budget_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  bool contains(int index) const;

  /// Throws InvalidArgument if any index is >= n.
  void check_range(int n) const;

  /// "1;3;4" (1-based, empty string for the empty set).
  std::string to_cell() const;

  /// Lexicographic order on the index lists; budget is ignored.
  friend bool operator==(const ExplanationSupport& a, const ExplanationSupport& b) {
    return a.indices_ == b.indices_;
  }
  friend std::strong_ordering operator<=>(const ExplanationSupport& a,
                                          const ExplanationSupport& b) {
    return a.indices_ <=> b.indices_;
  }

 private:
  std::vector<int> indices_;
  int budget_ = 0;
};

/// Moments of (x, w^T x, v^T x) under the model, propagated through C_x.
JointMoments analytic_moments(const GaussianModel& model);

struct MomentOptions {
  /// Subtract column means before forming second moments. Off by default
  /// because the model is zero-mean.
  bool center = false;
};

/// (1/m) * sum_i z_i z_i^T with z_i = (x_i, yhat_i, u_i). Throws TooFewSamples
/// for m < 2.
JointMoments empirical_moments(const SampleSet& samples, MomentOptions options = {});

/// Name of the generator used by sample(); recorded in every output that
/// depends on it.
inline constexpr const char* kRngName = "mt19937_64+polar/v1";

/// Draws m i.i.d. rows x ~ N(0, C_x) via an eigendecomposition factor of
/// C_x, with yhat = X w and u = X v exactly. Deterministic for a fixed seed.
/// Throws InvalidCount for m < 1 and FactorizationFailure if C_x is
/// numerically indefinite.
SampleSet sample(const GaussianModel& model, int m, std::uint64_t seed);

}  // namespace xplain
