#pragma once

#include <functional>
#include <span>

#include "kktdd/heat_operators.hpp"
#include "kktdd/layout.hpp"

namespace kktdd {

class SchurSolver;

/// State, control and adjoint blocks of the saddle-point unknown, stored as
/// one contiguous [u; z; w] buffer so Krylov vector arithmetic can run flat.
struct KKTVector {
  std::size_t block = 0;
  std::vector<double> data;

  explicit KKTVector(std::size_t block_size = 0)
      : block(block_size), data(3 * block_size, 0.0) {}

  std::span<double> u() { return {data.data(), block}; }
  std::span<double> z() { return {data.data() + block, block}; }
  std::span<double> w() { return {data.data() + 2 * block, block}; }
  std::span<const double> u() const { return {data.data(), block}; }
  std::span<const double> z() const { return {data.data() + block, block}; }
  std::span<const double> w() const { return {data.data() + 2 * block, block}; }
};

/// Right-hand side of the KKT system. f_z vanishes for this problem class and
/// f carries the initial condition on time-node 1 only.
struct RhsBundle {
  SpaceTimeVector f_u;
  SpaceTimeVector f_z;
  SpaceTimeVector f;

  KKTVector to_kkt() const;
};

using SpatialFn = std::function<double(double, double)>;
using SpaceTimeFn = std::function<double(double, double, double)>;

/// Samples the target and initial condition on the interior grid:
/// f_u^n = mass_scale * target(x_i, y_j, n*dt), f_z = 0, f^1 = u0 samples.
RhsBundle assemble_rhs(const HeatOperators& ops, const SpatialFn& u0,
                       const SpaceTimeFn& target);

/// out = K v with K = [[M_u, 0, J^T], [0, omega*M_z, L^T], [J, L, 0]].
/// The flat overloads treat the spans as [u; z; w] of 3 * layout-size values.
void apply_K(const HeatOperators& ops, std::span<const double> v, std::span<double> out);
void apply_K(const HeatOperators& ops, const KKTVector& v, KKTVector& out);

/// out = P^{-1} r with P = diag(M_u, omega*M_z, S-approximation).
void apply_P_inv(const HeatOperators& ops, const SchurSolver& schur,
                 std::span<const double> r, std::span<double> out);
void apply_P_inv(const HeatOperators& ops, const SchurSolver& schur, const KKTVector& r,
                 KKTVector& out);

/// Discrete objective 1/2*ms*sum_n ||u^n - target^n||^2
/// + omega/2*ms*sum_n ||z^n||^2.
double evaluate_objective(const HeatOperators& ops, std::span<const double> u,
                          std::span<const double> z, const SpaceTimeFn& target);

/// ||rhs - K v||_2 / ||rhs||_2 (absolute norm when rhs = 0).
double kkt_residual(const HeatOperators& ops, const KKTVector& v, const RhsBundle& rhs);

}  // namespace kktdd
