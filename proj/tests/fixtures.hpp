#pragma once
// Random instance generators shared by the unit tests and the acceptance suite.

#include <cstdint>
#include <random>

#include "oracles.hpp"
#include "xplain/core_model.hpp"

namespace fixture {

using xplain::Matrix;
using xplain::Vector;

inline Matrix gaussian_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> nd;
  Matrix a(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) a(i, j) = nd(rng);
  return a;
}

inline Vector gaussian_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = nd(rng);
  return v;
}

/// Random orthogonal matrix (Q factor of a Gaussian matrix).
inline Matrix random_orthogonal(std::mt19937_64& rng, int n) {
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(rng, n, n));
  return qr.householderQ() * Matrix::Identity(n, n);
}

/// Q diag(lambda) Q^T with eigenvalues uniform in [lo, hi].
inline Matrix random_covariance(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> ud(lo, hi);
  Vector lambda(n);
  for (int i = 0; i < n; ++i) lambda[i] = ud(rng);
  const Matrix q = random_orthogonal(rng, n);
  Matrix c = q * lambda.asDiagonal() * q.transpose();
  return 0.5 * (c + c.transpose());
}

/// Random model with spectrum in [0.5, 2] and standard normal w, v.
inline xplain::GaussianModel random_model(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  Matrix c = random_covariance(rng, n, 0.5, 2.0);
  Vector w = gaussian_vector(rng, n);
  Vector v = gaussian_vector(rng, n);
  return xplain::build_gaussian_model(std::move(c), std::move(w), std::move(v));
}

inline oracle::Mat to_rows(const Matrix& a) {
  oracle::Mat out = oracle::zeros(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out[i][j] = a(i, j);
  return out;
}

inline oracle::Vec to_vec(const Vector& v) { return oracle::Vec(v.data(), v.data() + v.size()); }

inline oracle::Mat oracle_sigma(const xplain::GaussianModel& model) {
  return oracle::joint_covariance(to_rows(model.cov_x()), to_vec(model.w()), to_vec(model.v()));
}

/// Oracle var(yhat | u, x_E) on an (n+2)x(n+2) covariance in (x, yhat, u) order.
inline double oracle_cond_var(const oracle::Mat& sigma, const std::vector<int>& support) {
  const std::size_t n = sigma.size() - 2;
  std::vector<std::size_t> given{n + 1};
  for (int i : support) given.push_back(static_cast<std::size_t>(i));
  return oracle::conditional_variance(sigma, n, given);
}

/// Random regression data set: correlated Gaussian design, a summary column
/// that mixes features, and a prediction with noise.
inline xplain::SampleSet random_regression(std::uint64_t seed, int m, int n, double noise = 0.5) {
  std::mt19937_64 rng(seed);
  const Matrix c = random_covariance(rng, n, 0.5, 2.0);
  Eigen::LLT<Matrix> llt(c);
  const Matrix x = gaussian_matrix(rng, m, n) * Matrix(llt.matrixL()).transpose();
  const Vector beta = gaussian_vector(rng, n);
  const Vector v = gaussian_vector(rng, n);
  const Vector u = x * v + 0.3 * gaussian_vector(rng, m);
  const Vector y = x * beta + 0.7 * u + noise * gaussian_vector(rng, m);
  return xplain::SampleSet(x, y, u);
}

}  // namespace fixture
