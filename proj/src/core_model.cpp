#include "xplain/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "xplain/error.hpp"
#include "xplain/kernels/kernels.hpp"
#include "xplain/rng.hpp"

namespace xplain {
namespace {

std::string shape(const Matrix& a) {
  std::ostringstream os;
  os << a.rows() << "x" << a.cols();
  return os.str();
}

}  // namespace

GaussianModel build_gaussian_model(Matrix cov_x, Vector w, Vector v) {
  if (cov_x.rows() != cov_x.cols())
    throw Error(ErrorCode::DimensionMismatch, "cov_x must be square, got " + shape(cov_x));
  if (cov_x.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "feature dimension must be >= 1");
  if (w.size() != cov_x.rows() || v.size() != cov_x.rows()) {
    std::ostringstream os;
    os << "cov_x is " << shape(cov_x) << " but len(w)=" << w.size() << ", len(v)=" << v.size();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  if (!cov_x.allFinite() || !w.allFinite() || !v.allFinite())
    throw Error(ErrorCode::NotPositiveSemidefinite, "model contains non-finite entries");
  if (!linalg::is_symmetric(cov_x, kCovarianceSlack))
    throw Error(ErrorCode::NotPositiveSemidefinite, "cov_x is not symmetric");
  if (!linalg::is_psd(cov_x, kCovarianceSlack))
    throw Error(ErrorCode::NotPositiveSemidefinite, "cov_x has a negative eigenvalue");
  return GaussianModel(std::move(cov_x), std::move(w), std::move(v));
}

SampleSet::SampleSet(Matrix features, Vector predictions, Vector summaries)
    : features_(std::move(features)),
      predictions_(std::move(predictions)),
      summaries_(std::move(summaries)) {
  if (features_.rows() == 0) throw Error(ErrorCode::InvalidCount, "sample set needs m >= 1 rows");
  if (features_.cols() == 0) throw Error(ErrorCode::DimensionMismatch, "sample set needs n >= 1 features");
  if (predictions_.size() != features_.rows() || summaries_.size() != features_.rows()) {
    std::ostringstream os;
    os << "features have " << features_.rows() << " rows but " << predictions_.size()
       << " predictions and " << summaries_.size() << " summaries";
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  if (!features_.allFinite() || !predictions_.allFinite() || !summaries_.allFinite())
    throw Error(ErrorCode::InvalidArgument, "sample set contains non-finite entries");
}

JointMoments::JointMoments(Matrix sigma, MomentSource source, int sample_count)
    : sigma_(std::move(sigma)), source_(source), sample_count_(sample_count) {
  if (sigma_.rows() != sigma_.cols() || sigma_.rows() < 3)
    throw Error(ErrorCode::DimensionMismatch,
                "joint moment matrix must be (n+2)x(n+2) with n >= 1, got " + shape(sigma_));
}

ExplanationSupport::ExplanationSupport(std::vector<int> indices)
    : ExplanationSupport(indices, static_cast<int>(indices.size())) {}

ExplanationSupport::ExplanationSupport(std::vector<int> indices, int budget)
    : indices_(std::move(indices)), budget_(budget) {
  if (budget_ < 0) throw Error(ErrorCode::InvalidArgument, "support budget must be >= 0");
  if (static_cast<int>(indices_.size()) > budget_)
    throw Error(ErrorCode::InvalidArgument, "support has " + std::to_string(indices_.size()) +
                                                " indices but budget " + std::to_string(budget_));
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0) throw Error(ErrorCode::InvalidArgument, "support index out of range");
    if (i > 0 && indices_[i] <= indices_[i - 1])
      throw Error(ErrorCode::InvalidArgument, "support indices must be strictly increasing");
  }
}

ExplanationSupport ExplanationSupport::from_one_based(const std::vector<int>& indices, int budget) {
  std::vector<int> zero_based(indices.size());
  std::transform(indices.begin(), indices.end(), zero_based.begin(), [](int i) { return i - 1; });
  return ExplanationSupport(std::move(zero_based), budget);
}

std::vector<int> ExplanationSupport::one_based() const {
  std::vector<int> out(indices_.size());
  std::transform(indices_.begin(), indices_.end(), out.begin(), [](int i) { return i + 1; });
  return out;
}

bool ExplanationSupport::contains(int index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

void ExplanationSupport::check_range(int n) const {
  if (!indices_.empty() && indices_.back() >= n)
    throw Error(ErrorCode::InvalidArgument, "support index " + std::to_string(indices_.back() + 1) +
                                                " exceeds feature dimension " + std::to_string(n));
}

std::string ExplanationSupport::to_cell() const {
  std::string out;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i > 0) out += ';';
    out += std::to_string(indices_[i] + 1);
  }
  return out;
}

JointMoments analytic_moments(const GaussianModel& model) {
  const int n = model.n();
  // A maps x to (x, yhat, u); sigma = A C_x A^T is PSD by construction.
  Matrix a(n + 2, n);
  a.topRows(n).setIdentity();
  a.row(n) = model.w().transpose();
  a.row(n + 1) = model.v().transpose();
  Matrix sigma = a * model.cov_x() * a.transpose();
  sigma = 0.5 * (sigma + sigma.transpose()).eval();
  return JointMoments(std::move(sigma), MomentSource::Analytic);
}

JointMoments empirical_moments(const SampleSet& samples, MomentOptions options) {
  const int m = samples.m();
  const int n = samples.n();
  if (m < 2) throw Error(ErrorCode::TooFewSamples, "empirical moments need m >= 2");

  Matrix z(m, n + 2);
  z.leftCols(n) = samples.features();
  z.col(n) = samples.predictions();
  z.col(n + 1) = samples.summaries();

  const auto& k = kernels::active();
  if (options.center) {
    for (int j = 0; j < n + 2; ++j) {
      const double mean = k.sum(z.col(j).data(), m) / m;
      z.col(j).array() -= mean;
    }
  }

  Matrix sigma(n + 2, n + 2);
  for (int i = 0; i < n + 2; ++i) {
    for (int j = i; j < n + 2; ++j) {
      const double s = k.dot(z.col(i).data(), z.col(j).data(), m) / m;
      sigma(i, j) = s;
      sigma(j, i) = s;
    }
  }
  return JointMoments(std::move(sigma), MomentSource::Empirical, m);
}

SampleSet sample(const GaussianModel& model, int m, std::uint64_t seed) {
  if (m < 1) throw Error(ErrorCode::InvalidCount, "sample count must be >= 1");
  const int n = model.n();
  Matrix factor;
  if (!linalg::psd_factor(model.cov_x(), kCovarianceSlack, factor))
    throw Error(ErrorCode::FactorizationFailure, "cov_x is numerically indefinite");

  NormalStream normals(seed);
  Matrix z(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = normals.next();

  // Adding +0.0 folds any -0.0 produced by zero factors into +0.0.
  Matrix features = (z * factor.transpose()).array() + 0.0;
  Vector predictions = (features * model.w()).array() + 0.0;
  Vector summaries = (features * model.v()).array() + 0.0;
  return SampleSet(std::move(features), std::move(predictions), std::move(summaries));
}

}  // namespace xplain
