#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kktdd/config.hpp"
#include "kktdd/heat_operators.hpp"
#include "kktdd/layout.hpp"
#include "kktdd/linalg.hpp"
#include "kktdd/time_partition.hpp"

namespace kktdd {

/// Builds the dense matrix of a linear operator column-by-column from unit
/// vectors. Desk-scale tool for oracles and the dense Schur variants.
DenseMatrix dense_from_operator(
    int n, const std::function<void(std::span<const double>, std::span<double>)>& apply);

/// Matrix-free out = Jhat M_u^{-1} Jhat^T v on the full layout.
void apply_shat(const HeatOperators& ops, std::span<const double> v, std::span<double> out);

/// Dense Schur surrogate Shat = Jhat M_u^{-1} Jhat^T (desk scale).
DenseMatrix assemble_dense_shat(const HeatOperators& ops);
/// Dense true Schur complement S = J M_u^{-1} J^T + omega^{-1} L M_z^{-1} L^T.
DenseMatrix assemble_dense_true_schur(const HeatOperators& ops);

/// One-level restricted-additive-Schwarz sweep over the time subdomains with
/// windowed subdomain solves: each subdomain gathers its nodes, scatters them
/// into the extended window (zero on the extra node), runs the forward then
/// adjoint time-integration solves, scales by the mass diagonal, drops the
/// extra node, masks to owned nodes and scatter-adds.
SpaceTimeVector apply_rasq(const HeatOperators& ops, const TimePartition& part,
                           const SpaceTimeVector& r);

/// Classical RAS with exact dense subdomain inverses of the principal
/// submatrices of Shat. Desk-scale test oracle; differs from apply_rasq on
/// every subdomain except the first.
SpaceTimeVector dense_ras_apply(const HeatOperators& ops, const TimePartition& part,
                                const SpaceTimeVector& r);

/// Assembles both sides of the windowed-product identity
/// R_s Shat R_s^T = R_s Q_s^T Jhat_s M_s^{-1} Jhat_s^T Q_s R_s^T
/// densely and returns the maximum elementwise difference.
double verify_subdomain_identity(const HeatOperators& ops, const TimePartition& part, int s);

/// Per-subdomain constant and linear temporal profiles, ownership-masked and
/// lifted into space, with the factored Galerkin coarse operator
/// S0 = Z^T Shat Z.
class CoarseSpace {
 public:
  struct Column {
    int s;     // subdomain
    int kind;  // 0 = constant profile, 1 = linear ramp
    int dof;   // spatial dof for the per-dof variant, -1 for scalar
  };

  CoarseVariant variant() const { return variant_; }
  int dim() const { return static_cast<int>(columns_.size()); }
  const std::vector<Column>& columns() const { return columns_; }

  /// c = Z^T r.
  void restrict_to_coarse(const SpaceTimeLayout& layout, const TimePartition& part,
                          std::span<const double> r, std::span<double> c) const;
  /// out += Z c.
  void prolong_add(const SpaceTimeLayout& layout, const TimePartition& part,
                   std::span<const double> c, std::span<double> out) const;
  /// c <- S0^{-1} c.
  void solve_in_place(std::span<double> c) const;

  /// Full-layout basis column (test and dense-oracle support).
  SpaceTimeVector column_vector(const SpaceTimeLayout& layout, const TimePartition& part,
                                int c) const;
  /// Coarse operator as a dense matrix (desk scale).
  DenseMatrix coarse_matrix_dense() const;

 private:
  friend CoarseSpace build_coarse_space(const HeatOperators&, const TimePartition&,
                                        CoarseVariant);
  CoarseSpace() = default;

  CoarseVariant variant_ = CoarseVariant::scalar;
  std::vector<Column> columns_;
  // Masked temporal profiles over the owned nodes of each subdomain.
  std::vector<std::vector<double>> phi_const_;
  std::vector<std::vector<double>> phi_lin_;
  std::optional<DenseMatrix> s0_dense_;
  std::optional<SparseMatrix> s0_sparse_;
  std::optional<DenseLU> s0_dense_lu_;
  std::optional<SparseLU> s0_sparse_lu_;
};

/// Assembles Z and the Galerkin coarse operator using matrix-free
/// Jhat^T -> M^{-1} -> Jhat sweeps on each basis column (restricted to the
/// column's support window), then factorizes S0.
CoarseSpace build_coarse_space(const HeatOperators& ops, const TimePartition& part,
                               CoarseVariant variant);

/// Two-level application. "literal" composes the coarse solve with the
/// one-level sweep (a rank-deficient map, kept for study); "multiplicative"
/// is coarse solve, matrix-free residual update with Shat, then the one-level
/// sweep; "additive" sums both corrections.
SpaceTimeVector apply_two_level(const HeatOperators& ops, const TimePartition& part,
                                const CoarseSpace& coarse, const SpaceTimeVector& r,
                                TwoLevelForm form);

/// Schur-block solver behind the block preconditioner: dispatches to the
/// one-level sweep, the two-level scheme, a dense factorization of Shat or of
/// the true S, classical dense RAS, or the identity.
class SchurSolver {
 public:
  enum class Kind { identity, one_level, two_level, dense_shat, dense_ras, dense_true };

  static SchurSolver make_identity(const HeatOperators& ops);
  static SchurSolver make_one_level(const HeatOperators& ops, const TimePartition& part);
  static SchurSolver make_two_level(const HeatOperators& ops, const TimePartition& part,
                                    CoarseVariant variant, TwoLevelForm form);
  static SchurSolver make_dense_shat(const HeatOperators& ops);
  static SchurSolver make_dense_ras(const HeatOperators& ops, const TimePartition& part);
  static SchurSolver make_dense_true(const HeatOperators& ops);

  Kind kind() const { return kind_; }
  const CoarseSpace* coarse() const { return coarse_ ? &*coarse_ : nullptr; }

  void apply(std::span<const double> r, std::span<double> out) const;

 private:
  explicit SchurSolver(Kind kind, const HeatOperators& ops) : kind_(kind), ops_(&ops) {}

  Kind kind_;
  const HeatOperators* ops_;
  const TimePartition* part_ = nullptr;
  std::optional<CoarseSpace> coarse_;
  TwoLevelForm form_ = TwoLevelForm::multiplicative;
  std::optional<DenseLU> dense_lu_;          // dense_shat / dense_true
  std::vector<DenseLU> subdomain_lu_;        // dense_ras
};

/// Maps the configured preconditioner kind onto a SchurSolver (PrecondKind::
/// none yields the identity variant; callers usually skip preconditioning
/// entirely in that case).
SchurSolver make_schur_solver(const HeatOperators& ops, const TimePartition& part,
                              const ProblemConfig& cfg);

}  // namespace kktdd
