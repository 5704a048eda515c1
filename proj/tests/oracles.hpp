#pragma once

// Test-only numerical oracles, written independently of the library kernels
// they check: plain vector-of-vectors Gaussian elimination, dense products,
// and a numerical rank count.

#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<double>>;

inline Mat zeros(std::size_t r, std::size_t c) {
  return Mat(r, std::vector<double>(c, 0.0));
}

inline Mat transpose(const Mat& a) {
  Mat t = zeros(a.empty() ? 0 : a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline Mat matmul(const Mat& a, const Mat& b) {
  Mat c = zeros(a.size(), b[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline std::vector<double> matvec(const Mat& a, const std::vector<double>& x) {
  std::vector<double> y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

/// Gaussian elimination with partial pivoting; throws on numerically singular
/// input.
inline std::vector<double> gauss_solve(Mat a, std::vector<double> b) {
  const std::size_t n = a.size();
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t p = j;
    for (std::size_t i = j + 1; i < n; ++i)
      if (std::fabs(a[i][j]) > std::fabs(a[p][j])) p = i;
    if (std::fabs(a[p][j]) == 0.0) throw std::runtime_error("gauss_solve: singular");
    std::swap(a[j], a[p]);
    std::swap(b[j], b[p]);
    for (std::size_t i = j + 1; i < n; ++i) {
      const double l = a[i][j] / a[j][j];
      for (std::size_t k = j; k < n; ++k) a[i][k] -= l * a[j][k];
      b[i] -= l * b[j];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t k = i + 1; k < n; ++k) acc -= a[i][k] * x[k];
    x[i] = acc / a[i][i];
  }
  return x;
}

inline Mat inverse(const Mat& a) {
  const std::size_t n = a.size();
  Mat inv = zeros(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    const auto col = gauss_solve(a, e);
    for (std::size_t i = 0; i < n; ++i) inv[i][j] = col[i];
  }
  return inv;
}

/// Rank by row elimination with partial pivoting against a relative
/// threshold.
inline int numerical_rank(Mat a, double rel_tol = 1e-10) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a[0].size();
  double scale = 0.0;
  for (const auto& row : a)
    for (double v : row) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) return 0;
  const double tol = rel_tol * scale;
  int rank = 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    for (std::size_t i = r + 1; i < rows; ++i)
      if (std::fabs(a[i][c]) > std::fabs(a[p][c])) p = i;
    if (std::fabs(a[p][c]) <= tol) continue;
    std::swap(a[r], a[p]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      const double l = a[i][c] / a[r][c];
      for (std::size_t k = c; k < cols; ++k) a[i][k] -= l * a[r][k];
    }
    ++rank;
    ++r;
  }
  return rank;
}

inline double rel_err(const std::vector<double>& got, const std::vector<double>& want) {
  double dn = 0.0, wn = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    dn += (got[i] - want[i]) * (got[i] - want[i]);
    wn += want[i] * want[i];
  }
  return wn > 0 ? std::sqrt(dn / wn) : std::sqrt(dn);
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

}  // namespace oracle
