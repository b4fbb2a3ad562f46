#pragma once
// Reference computations for tests. Deliberately written with plain
// std::vector arithmetic and textbook algorithms so they share no code path
// with the library (no Eigen, no kernels, no pseudoinverse).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<double>>;
using Vec = std::vector<double>;

inline Mat zeros(std::size_t r, std::size_t c) { return Mat(r, Vec(c, 0.0)); }

inline Mat transpose(const Mat& a) {
  Mat t = zeros(a.empty() ? 0 : a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline Mat multiply(const Mat& a, const Mat& b) {
  Mat c = zeros(a.size(), b.empty() ? 0 : b[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[k].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

/// Covariance of (x, w^T x, v^T x) written out block by block.
inline Mat joint_covariance(const Mat& c, const Vec& w, const Vec& v) {
  const std::size_t n = w.size();
  Mat s = zeros(n + 2, n + 2);
  Vec cw(n, 0.0), cv(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cw[i] += c[i][j] * w[j];
      cv[i] += c[i][j] * v[j];
    }
  double ww = 0, wv = 0, vv = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ww += w[i] * cw[i];
    wv += w[i] * cv[i];
    vv += v[i] * cv[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) s[i][j] = c[i][j];
    s[i][n] = s[n][i] = cw[i];
    s[i][n + 1] = s[n + 1][i] = cv[i];
  }
  s[n][n] = ww;
  s[n][n + 1] = s[n + 1][n] = wv;
  s[n + 1][n + 1] = vv;
  return s;
}

/// Residual variance of `target` after conditioning on `given`, by the sweep
/// operator: condition on one variable at a time, skipping variables whose
/// remaining variance is below `rel_pivot` times the largest initial variance.
inline double conditional_variance(Mat s, std::size_t target, const std::vector<std::size_t>& given,
                                   double rel_pivot = 1e-11) {
  double scale = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) scale = std::max(scale, std::abs(s[i][i]));
  for (std::size_t k : given) {
    const double p = s[k][k];
    if (!(p > rel_pivot * scale)) continue;
    const Vec col = [&] {
      Vec c(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) c[i] = s[i][k];
      return c;
    }();
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = 0; j < s.size(); ++j) s[i][j] -= col[i] * col[j] / p;
  }
  return std::max(0.0, s[target][target]);
}

/// Solves A x = b by Gauss-Jordan elimination with partial pivoting.
inline Vec solve(Mat a, Vec b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0) throw std::runtime_error("oracle::solve: singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

/// Least squares of y on the given columns via the normal equations.
/// Returns the coefficients; `rss` receives the residual sum of squares.
inline Vec least_squares(const std::vector<Vec>& columns, const Vec& y, double* rss = nullptr) {
  const std::size_t d = columns.size();
  const std::size_t m = y.size();
  Mat g = zeros(d, d);
  Vec h(d, 0.0);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t i = 0; i < m; ++i) h[a] += columns[a][i] * y[i];
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t i = 0; i < m; ++i) g[a][b] += columns[a][i] * columns[b][i];
  }
  Vec coef = d == 0 ? Vec{} : solve(g, h);
  if (rss != nullptr) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double r = y[i];
      for (std::size_t a = 0; a < d; ++a) r -= coef[a] * columns[a][i];
      acc += r * r;
    }
    *rss = acc;
  }
  return coef;
}

/// (X^T X + ridge I)^{-1} X^T y with X given row-major.
inline Vec ridge(const Mat& x, const Vec& y, double lambda) {
  const std::size_t n = x.empty() ? 0 : x[0].size();
  Mat g = zeros(n, n);
  Vec h(n, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t a = 0; a < n; ++a) {
      h[a] += x[i][a] * y[i];
      for (std::size_t b = 0; b < n; ++b) g[a][b] += x[i][a] * x[i][b];
    }
  for (std::size_t a = 0; a < n; ++a) g[a][a] += lambda;
  return solve(g, h);
}

inline double soft_threshold(double z, double t) {
  return z > t ? z - t : (z < -t ? z + t : 0.0);
}

/// All subsets of {0..n-1} with at most k elements, built by recursion.
inline std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    out.push_back(cur);
    if (static_cast<int>(cur.size()) == k) return;
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline bool is_subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace oracle
