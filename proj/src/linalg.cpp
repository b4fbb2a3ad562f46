#include "xplain/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace xplain::linalg {

Matrix symmetric_pinv(const Matrix& a, double cutoff) {
  const Eigen::Index k = a.rows();
  if (k == 0) return Matrix(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  const Vector& lambda = eig.eigenvalues();
  const double radius = lambda.cwiseAbs().maxCoeff();
  if (!(radius > 0.0)) return Matrix::Zero(k, k);
  Vector inv(k);
  for (Eigen::Index i = 0; i < k; ++i)
    inv[i] = std::abs(lambda[i]) > cutoff * radius ? 1.0 / lambda[i] : 0.0;
  const Matrix& q = eig.eigenvectors();
  return q * inv.asDiagonal() * q.transpose();
}

Vector solve_symmetric(const Matrix& a, const Vector& b, double cutoff) {
  if (a.rows() == 0) return Vector(0);
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() == Eigen::Success && llt.rcond() > cutoff) return llt.solve(b);
  return symmetric_pinv(a, cutoff) * b;
}

bool is_symmetric(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  if (a.size() == 0) return true;
  const double scale = a.cwiseAbs().maxCoeff();
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  return asym <= rel_tol * scale;
}

bool is_psd(const Matrix& a, double rel_slack) {
  if (a.size() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
  const Vector& lambda = eig.eigenvalues();
  const double radius = lambda.cwiseAbs().maxCoeff();
  return lambda.minCoeff() >= -rel_slack * radius;
}

bool psd_factor(const Matrix& a, double rel_slack, Matrix& f) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  if (eig.info() != Eigen::Success) return false;
  Vector lambda = eig.eigenvalues();
  const double radius = a.size() == 0 ? 0.0 : lambda.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < -rel_slack * radius) return false;
    lambda[i] = std::sqrt(std::max(lambda[i], 0.0));
  }
  f = eig.eigenvectors() * lambda.asDiagonal();
  return true;
}

}  // namespace xplain::linalg
