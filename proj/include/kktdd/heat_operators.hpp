#pragma once

#include <span>

#include "kktdd/config.hpp"
#include "kktdd/layout.hpp"
#include "kktdd/linalg.hpp"

namespace kktdd {

/// Assembles the per-step implicit operator A = I + dt*nu*K5 on the interior
/// grid (homogeneous Dirichlet boundary couplings dropped). K5 is the 5-point
/// stencil with x-weights 1/dx^2 and y-weights 1/dy^2; the band has
/// kl = ku = Nx-1.
BandedMatrix assemble_spatial_operator(const ProblemConfig& cfg);

/// Factorized per-step operators for matrix-free applications of the
/// space-time blocks and for the forward/adjoint window solves.
///
/// J is block lower bidiagonal with diagonal A and subdiagonal -I; L is
/// block diagonal -dt*I; M_u = M_z = mass_scale*I. The Schur surrogate's
/// Jhat = J + sigma*L has diagonal block Ahat = A - sigma*dt*I.
///
/// Immutable after construction; all applications and window solves are
/// re-entrant.
struct HeatOperators {
  explicit HeatOperators(const ProblemConfig& cfg);

  ProblemConfig config;
  SpaceTimeLayout layout;
  double dt;
  double mass_scale;
  double shift;  // sigma = sign * omega^{-1/2}

  BandedMatrix A;
  BandedMatrix Ahat;
  BandedLU A_factors;
  BandedLU Ahat_factors;
};

// Matrix-free applications on full space-time vectors (in and out must not
// alias and must both have layout length).
void apply_J(const HeatOperators& ops, std::span<const double> u, std::span<double> out);
void apply_JT(const HeatOperators& ops, std::span<const double> w, std::span<double> out);
void apply_L(const HeatOperators& ops, std::span<const double> z, std::span<double> out);
void apply_LT(const HeatOperators& ops, std::span<const double> w, std::span<double> out);
void apply_Mu(const HeatOperators& ops, std::span<const double> u, std::span<double> out);
void apply_Mu_inv(const HeatOperators& ops, std::span<const double> u, std::span<double> out);
void apply_Mz(const HeatOperators& ops, std::span<const double> z, std::span<double> out);
void apply_Jhat(const HeatOperators& ops, std::span<const double> u, std::span<double> out);
void apply_JhatT(const HeatOperators& ops, std::span<const double> w, std::span<double> out);

/// In-place x = Jhat_window^{-1} b on a contiguous window of time-nodes laid
/// out as consecutive n_sp blocks: sequential forward substitution
/// x^k = Ahat^{-1}(b^k + x^{k-1}) with zero incoming state at the first
/// window node.
void forward_solve_window(const HeatOperators& ops, std::span<double> b);

/// In-place x = Jhat_window^{-T} b: backward substitution in time,
/// x^k = Ahat^{-T}(b^k + x^{k+1}) with zero state past the window end.
void adjoint_solve_window(const HeatOperators& ops, std::span<double> b);

}  // namespace kktdd
