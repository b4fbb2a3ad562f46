#pragma once

#include <Eigen/Dense>

namespace xplain {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace linalg {

/// Relative spectral cutoff used wherever a singular covariance block has to
/// be inverted.
inline constexpr double kPinvCutoff = 1e-10;

/// Moore-Penrose pseudoinverse of a symmetric matrix via eigendecomposition.
/// Eigenvalues with |lambda| <= cutoff * max|lambda| are treated as zero.
Matrix symmetric_pinv(const Matrix& a, double cutoff = kPinvCutoff);

/// Solves the symmetric system a x = b, trying Cholesky first and falling back
/// to the pseudoinverse when a is singular or badly conditioned.
Vector solve_symmetric(const Matrix& a, const Vector& b, double cutoff = kPinvCutoff);

/// max |a_ij - a_ji| <= rel_tol * max |a_ij|
bool is_symmetric(const Matrix& a, double rel_tol);

/// Smallest eigenvalue >= -rel_slack * spectral radius (a assumed symmetric).
bool is_psd(const Matrix& a, double rel_slack);

/// Factor f with f * f^T == a for symmetric PSD a, built from the
/// eigendecomposition so singular inputs are fine. Negative eigenvalues inside
/// the slack are clipped to zero; returns false if one lies outside it.
bool psd_factor(const Matrix& a, double rel_slack, Matrix& f);

}  // namespace linalg
}  // namespace xplain
