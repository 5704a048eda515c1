#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace kktdd {

/// Raised when a factorization meets a pivot below the singularity
/// threshold; carries the offending pivot index.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, int pivot_index)
      : std::runtime_error(what), pivot_index(pivot_index) {}
  int pivot_index;
};

/// Square banded matrix, column-compressed band storage: entry (i,j) with
/// j-ku <= i <= j+kl lives at data[j*(kl+ku+1) + (i-j+ku)].
struct BandedMatrix {
  int n = 0;
  int kl = 0;
  int ku = 0;
  std::vector<double> data;

  static BandedMatrix zero(int n, int kl, int ku);

  bool in_band(int i, int j) const {
    return i >= 0 && i < n && j >= 0 && j < n && i - j <= kl && j - i <= ku;
  }
  double at(int i, int j) const {
    return in_band(i, j) ? data[static_cast<std::size_t>(j) * (kl + ku + 1) + (i - j + ku)]
                         : 0.0;
  }
  double& ref(int i, int j) {
    return data[static_cast<std::size_t>(j) * (kl + ku + 1) + (i - j + ku)];
  }
  double norm_inf() const;
};

/// y = A x (no aliasing).
void band_matvec(const BandedMatrix& A, std::span<const double> x, std::span<double> y);
/// y = A^T x.
void band_matvec_transpose(const BandedMatrix& A, std::span<const double> x,
                           std::span<double> y);

/// LU factorization of a banded matrix with partial pivoting. Immutable after
/// construction; solves are in-place on the caller's buffer and re-entrant.
class BandedLU {
 public:
  explicit BandedLU(const BandedMatrix& A);

  int n() const { return n_; }
  double pivot_growth() const { return pivot_growth_; }

  void solve_in_place(std::span<double> b) const;
  void solve_transpose_in_place(std::span<double> b) const;

 private:
  int n_ = 0;
  int kl_ = 0;
  int ku_ = 0;   // fill-extended upper bandwidth (original ku + kl)
  std::vector<double> ab_;   // (kl + ku_ + 1) rows per column, col-major
  std::vector<int> piv_;
  double pivot_growth_ = 0.0;

  double& entry(int i, int j) {
    return ab_[static_cast<std::size_t>(j) * (kl_ + ku_ + 1) + (i - j + ku_)];
  }
  double entry(int i, int j) const {
    return ab_[static_cast<std::size_t>(j) * (kl_ + ku_ + 1) + (i - j + ku_)];
  }
};

/// Dense row-major matrix; used for desk-scale oracles and the scalar-variant
/// coarse operator.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  static DenseMatrix zero(int rows, int cols);
  static DenseMatrix identity(int n);

  double& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  double at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
  double norm_inf() const;
};

void dense_matvec(const DenseMatrix& A, std::span<const double> x, std::span<double> y);

class DenseLU {
 public:
  explicit DenseLU(const DenseMatrix& A);

  int n() const { return n_; }
  double pivot_growth() const { return pivot_growth_; }

  void solve_in_place(std::span<double> b) const;
  void solve_transpose_in_place(std::span<double> b) const;

 private:
  int n_ = 0;
  std::vector<double> lu_;   // row-major
  std::vector<int> piv_;
  double pivot_growth_ = 0.0;
};

/// Compressed-row sparse matrix; column indices sorted and unique per row.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::size_t> row_offsets;  // rows+1 entries
  std::vector<int> col_indices;
  std::vector<double> values;
};

/// Accumulates (i, j, value) triplets; duplicates are summed.
SparseMatrix sparse_from_triplets(int rows, int cols,
                                  std::vector<std::tuple<int, int, double>> triplets);

void sparse_matvec(const SparseMatrix& A, std::span<const double> x, std::span<double> y);

/// Direct solver for sparse matrices with a banded envelope: the CSR pattern
/// determines the bandwidths and the factorization is a pivoted banded LU.
/// Adequate for the block-tridiagonal coarse operators this project builds;
/// no fill-reducing ordering.
class SparseLU {
 public:
  explicit SparseLU(const SparseMatrix& A);

  int n() const { return lu_.n(); }
  double pivot_growth() const { return lu_.pivot_growth(); }
  void solve_in_place(std::span<double> b) const { lu_.solve_in_place(b); }

 private:
  BandedLU lu_;
  static BandedMatrix to_banded(const SparseMatrix& A);
};

// Free-function spellings of the factor/solve operations.
BandedLU band_factor(const BandedMatrix& A);
std::vector<double> band_solve(const BandedLU& F, std::vector<double> b);
std::vector<double> band_solve_transpose(const BandedLU& F, std::vector<double> b);
DenseLU dense_factor(const DenseMatrix& A);
std::vector<double> dense_solve(const DenseLU& F, std::vector<double> b);
SparseLU sparse_factor(const SparseMatrix& A);
std::vector<double> sparse_solve(const SparseLU& F, std::vector<double> b);
DenseMatrix dense_inverse(const DenseMatrix& A);

// Small vector helpers shared across modules.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace kktdd
