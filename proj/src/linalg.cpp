#include "kktdd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace kktdd {

namespace {
constexpr double kSingularTol = 1e-14;

void check_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": length " + std::to_string(got) +
                                ", expected " + std::to_string(want));
  }
}
}  // namespace

BandedMatrix BandedMatrix::zero(int n, int kl, int ku) {
  if (n < 0 || kl < 0 || ku < 0 || kl > std::max(0, n - 1) || ku > std::max(0, n - 1)) {
    throw std::invalid_argument("BandedMatrix: invalid dimensions n=" + std::to_string(n) +
                                " kl=" + std::to_string(kl) + " ku=" + std::to_string(ku));
  }
  BandedMatrix A;
  A.n = n;
  A.kl = kl;
  A.ku = ku;
  A.data.assign(static_cast<std::size_t>(n) * (kl + ku + 1), 0.0);
  return A;
}

double BandedMatrix::norm_inf() const {
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j) {
      row += std::abs(at(i, j));
    }
    best = std::max(best, row);
  }
  return best;
}

void band_matvec(const BandedMatrix& A, std::span<const double> x, std::span<double> y) {
  check_length(x.size(), static_cast<std::size_t>(A.n), "band_matvec x");
  check_length(y.size(), static_cast<std::size_t>(A.n), "band_matvec y");
  for (int i = 0; i < A.n; ++i) {
    double acc = 0.0;
    int jlo = std::max(0, i - A.kl), jhi = std::min(A.n - 1, i + A.ku);
    for (int j = jlo; j <= jhi; ++j) acc += A.at(i, j) * x[j];
    y[i] = acc;
  }
}

void band_matvec_transpose(const BandedMatrix& A, std::span<const double> x,
                           std::span<double> y) {
  check_length(x.size(), static_cast<std::size_t>(A.n), "band_matvec_transpose x");
  check_length(y.size(), static_cast<std::size_t>(A.n), "band_matvec_transpose y");
  for (int i = 0; i < A.n; ++i) {
    double acc = 0.0;
    // (A^T)(i,j) = A(j,i): j ranges over rows whose band covers column i.
    int jlo = std::max(0, i - A.ku), jhi = std::min(A.n - 1, i + A.kl);
    for (int j = jlo; j <= jhi; ++j) acc += A.at(j, i) * x[j];
    y[i] = acc;
  }
}

BandedLU::BandedLU(const BandedMatrix& A)
    : n_(A.n), kl_(A.kl), ku_(std::min(A.n > 0 ? A.n - 1 : 0, A.ku + A.kl)) {
  const int ld = kl_ + ku_ + 1;
  ab_.assign(static_cast<std::size_t>(n_) * ld, 0.0);
  piv_.assign(n_, 0);
  for (int j = 0; j < n_; ++j) {
    for (int i = std::max(0, j - A.ku); i <= std::min(n_ - 1, j + A.kl); ++i) {
      entry(i, j) = A.at(i, j);
    }
  }

  const double anorm = A.norm_inf();
  const double tol = kSingularTol * anorm;
  double umax = 0.0;
  double amax = 0.0;
  for (double v : ab_) amax = std::max(amax, std::abs(v));

  for (int j = 0; j < n_; ++j) {
    // Pivot search in column j, rows j..j+kl.
    int p = j;
    double best = std::abs(entry(j, j));
    for (int i = j + 1; i <= std::min(n_ - 1, j + kl_); ++i) {
      double v = std::abs(entry(i, j));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    piv_[j] = p;
    if (!(best > tol)) {
      throw SingularMatrixError(
          "banded LU: pivot " + std::to_string(best) + " at index " + std::to_string(j) +
              " below tolerance " + std::to_string(tol),
          j);
    }
    const int jmax = std::min(n_ - 1, j + ku_);
    const int imax = std::min(n_ - 1, j + kl_);
    if (p != j) {
      for (int c = j; c <= jmax; ++c) std::swap(entry(j, c), entry(p, c));
    }
    const double d = entry(j, j);
    umax = std::max(umax, std::abs(d));
    for (int i = j + 1; i <= imax; ++i) entry(i, j) /= d;
    // Rank-1 update, column by column so the inner loop walks contiguous
    // storage.
    for (int c = j + 1; c <= jmax; ++c) {
      const double ujc = entry(j, c);
      umax = std::max(umax, std::abs(ujc));
      if (ujc != 0.0) {
        double* col = &entry(j + 1, c);
        const double* mul = &entry(j + 1, j);
        for (int i = 0; i <= imax - j - 1; ++i) col[i] -= mul[i] * ujc;
      }
    }
  }
  pivot_growth_ = amax > 0.0 ? umax / amax : 0.0;
}

void BandedLU::solve_in_place(std::span<double> b) const {
  check_length(b.size(), static_cast<std::size_t>(n_), "band_solve b");
  // Forward: apply P and L.
  for (int j = 0; j < n_; ++j) {
    if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
    const double bj = b[j];
    if (bj != 0.0) {
      for (int i = j + 1; i <= std::min(n_ - 1, j + kl_); ++i) b[i] -= entry(i, j) * bj;
    }
  }
  // Back substitution with U (bandwidth ku_).
  for (int j = n_ - 1; j >= 0; --j) {
    b[j] /= entry(j, j);
    const double bj = b[j];
    if (bj != 0.0) {
      for (int i = std::max(0, j - ku_); i < j; ++i) b[i] -= entry(i, j) * bj;
    }
  }
}

void BandedLU::solve_transpose_in_place(std::span<double> b) const {
  check_length(b.size(), static_cast<std::size_t>(n_), "band_solve_transpose b");
  // U^T y = b (forward substitution over U's columns).
  for (int j = 0; j < n_; ++j) {
    double acc = b[j];
    for (int i = std::max(0, j - ku_); i < j; ++i) acc -= entry(i, j) * b[i];
    b[j] = acc / entry(j, j);
  }
  // Transposed elimination sequence, in reverse.
  for (int j = n_ - 1; j >= 0; --j) {
    double acc = b[j];
    for (int i = j + 1; i <= std::min(n_ - 1, j + kl_); ++i) acc -= entry(i, j) * b[i];
    b[j] = acc;
    if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
  }
}

DenseMatrix DenseMatrix::zero(int rows, int cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("DenseMatrix: negative dimension");
  DenseMatrix A;
  A.rows = rows;
  A.cols = cols;
  A.data.assign(static_cast<std::size_t>(rows) * cols, 0.0);
  return A;
}

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix A = zero(n, n);
  for (int i = 0; i < n; ++i) A.at(i, i) = 1.0;
  return A;
}

double DenseMatrix::norm_inf() const {
  double best = 0.0;
  for (int i = 0; i < rows; ++i) {
    double row = 0.0;
    for (int j = 0; j < cols; ++j) row += std::abs(at(i, j));
    best = std::max(best, row);
  }
  return best;
}

void dense_matvec(const DenseMatrix& A, std::span<const double> x, std::span<double> y) {
  check_length(x.size(), static_cast<std::size_t>(A.cols), "dense_matvec x");
  check_length(y.size(), static_cast<std::size_t>(A.rows), "dense_matvec y");
  for (int i = 0; i < A.rows; ++i) {
    double acc = 0.0;
    for (int j = 0; j < A.cols; ++j) acc += A.at(i, j) * x[j];
    y[i] = acc;
  }
}

DenseLU::DenseLU(const DenseMatrix& A) : n_(A.rows), lu_(A.data), piv_(A.rows, 0) {
  if (A.rows != A.cols) throw std::invalid_argument("dense_factor: matrix not square");
  const double tol = kSingularTol * A.norm_inf();
  double amax = 0.0;
  for (double v : lu_) amax = std::max(amax, std::abs(v));

  auto at = [&](int i, int j) -> double& { return lu_[static_cast<std::size_t>(i) * n_ + j]; };
  for (int j = 0; j < n_; ++j) {
    int p = j;
    double best = std::abs(at(j, j));
    for (int i = j + 1; i < n_; ++i) {
      if (std::abs(at(i, j)) > best) {
        best = std::abs(at(i, j));
        p = i;
      }
    }
    piv_[j] = p;
    if (!(best > tol)) {
      throw SingularMatrixError("dense LU: pivot below tolerance at index " + std::to_string(j),
                                j);
    }
    if (p != j) {
      for (int c = 0; c < n_; ++c) std::swap(at(j, c), at(p, c));
    }
    const double d = at(j, j);
    for (int i = j + 1; i < n_; ++i) {
      const double l = at(i, j) / d;
      at(i, j) = l;
      for (int c = j + 1; c < n_; ++c) at(i, c) -= l * at(j, c);
    }
  }
  double umax = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) umax = std::max(umax, std::abs(at(i, j)));
  pivot_growth_ = amax > 0.0 ? umax / amax : 0.0;
}

void DenseLU::solve_in_place(std::span<double> b) const {
  check_length(b.size(), static_cast<std::size_t>(n_), "dense_solve b");
  auto at = [&](int i, int j) { return lu_[static_cast<std::size_t>(i) * n_ + j]; };
  for (int j = 0; j < n_; ++j) {
    if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
    const double bj = b[j];
    for (int i = j + 1; i < n_; ++i) b[i] -= at(i, j) * bj;
  }
  for (int j = n_ - 1; j >= 0; --j) {
    b[j] /= at(j, j);
    const double bj = b[j];
    for (int i = 0; i < j; ++i) b[i] -= at(i, j) * bj;
  }
}

void DenseLU::solve_transpose_in_place(std::span<double> b) const {
  check_length(b.size(), static_cast<std::size_t>(n_), "dense_solve_transpose b");
  auto at = [&](int i, int j) { return lu_[static_cast<std::size_t>(i) * n_ + j]; };
  for (int j = 0; j < n_; ++j) {
    double acc = b[j];
    for (int i = 0; i < j; ++i) acc -= at(i, j) * b[i];
    b[j] = acc / at(j, j);
  }
  for (int j = n_ - 1; j >= 0; --j) {
    double acc = b[j];
    for (int i = j + 1; i < n_; ++i) acc -= at(i, j) * b[i];
    b[j] = acc;
    if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
  }
}

SparseMatrix sparse_from_triplets(int rows, int cols,
                                  std::vector<std::tuple<int, int, double>> triplets) {
  for (auto& [i, j, v] : triplets) {
    if (i < 0 || i >= rows || j < 0 || j >= cols) {
      throw std::invalid_argument("sparse_from_triplets: entry (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") out of range");
    }
  }
  std::sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  SparseMatrix A;
  A.rows = rows;
  A.cols = cols;
  A.row_offsets.assign(rows + 1, 0);
  for (std::size_t k = 0; k < triplets.size();) {
    auto [i, j, v] = triplets[k];
    double sum = v;
    std::size_t k2 = k + 1;
    while (k2 < triplets.size() && std::get<0>(triplets[k2]) == i &&
           std::get<1>(triplets[k2]) == j) {
      sum += std::get<2>(triplets[k2]);
      ++k2;
    }
    A.col_indices.push_back(j);
    A.values.push_back(sum);
    A.row_offsets[i + 1]++;
    k = k2;
  }
  for (int i = 0; i < rows; ++i) A.row_offsets[i + 1] += A.row_offsets[i];
  return A;
}

void sparse_matvec(const SparseMatrix& A, std::span<const double> x, std::span<double> y) {
  check_length(x.size(), static_cast<std::size_t>(A.cols), "sparse_matvec x");
  check_length(y.size(), static_cast<std::size_t>(A.rows), "sparse_matvec y");
  for (int i = 0; i < A.rows; ++i) {
    double acc = 0.0;
    for (std::size_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      acc += A.values[k] * x[A.col_indices[k]];
    }
    y[i] = acc;
  }
}

BandedMatrix SparseLU::to_banded(const SparseMatrix& A) {
  if (A.rows != A.cols) throw std::invalid_argument("sparse_factor: matrix not square");
  int kl = 0, ku = 0;
  for (int i = 0; i < A.rows; ++i) {
    for (std::size_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      const int j = A.col_indices[k];
      kl = std::max(kl, i - j);
      ku = std::max(ku, j - i);
    }
  }
  BandedMatrix B = BandedMatrix::zero(A.rows, kl, ku);
  for (int i = 0; i < A.rows; ++i) {
    for (std::size_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      B.ref(i, A.col_indices[k]) = A.values[k];
    }
  }
  return B;
}

SparseLU::SparseLU(const SparseMatrix& A) : lu_(to_banded(A)) {}

BandedLU band_factor(const BandedMatrix& A) { return BandedLU(A); }

std::vector<double> band_solve(const BandedLU& F, std::vector<double> b) {
  F.solve_in_place(b);
  return b;
}

std::vector<double> band_solve_transpose(const BandedLU& F, std::vector<double> b) {
  F.solve_transpose_in_place(b);
  return b;
}

DenseLU dense_factor(const DenseMatrix& A) { return DenseLU(A); }

std::vector<double> dense_solve(const DenseLU& F, std::vector<double> b) {
  F.solve_in_place(b);
  return b;
}

SparseLU sparse_factor(const SparseMatrix& A) { return SparseLU(A); }

std::vector<double> sparse_solve(const SparseLU& F, std::vector<double> b) {
  F.solve_in_place(b);
  return b;
}

DenseMatrix dense_inverse(const DenseMatrix& A) {
  DenseLU lu(A);
  DenseMatrix inv = DenseMatrix::zero(A.rows, A.rows);
  std::vector<double> col(A.rows, 0.0);
  for (int j = 0; j < A.rows; ++j) {
    std::fill(col.begin(), col.end(), 0.0);
    col[j] = 1.0;
    lu.solve_in_place(col);
    for (int i = 0; i < A.rows; ++i) inv.at(i, j) = col[i];
  }
  return inv;
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_length(b.size(), a.size(), "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_length(y.size(), x.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace kktdd
