#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace kktdd {

/// Schur-complement approximation used inside the block preconditioner.
enum class PrecondKind { none, one_level, two_level, dense_schur, true_schur };

/// Spatial lifting of the temporal coarse profiles.
enum class CoarseVariant { scalar, per_dof };

/// How the coarse solve is combined with the one-level sweep.
enum class TwoLevelForm { literal, multiplicative, additive };

/// Sign of the regularization shift in the Schur surrogate's diagonal block.
enum class JhatSign { plus, minus };

struct GmresParams {
  double tol = 1e-6;
  int max_iters = 420;
  std::optional<int> restart;  // no value = full (non-restarted) GMRES
  double happy_breakdown_tol = 1e-14;
};

/// All continuous and discrete parameters of the heat-control problem.
///
/// The rectangle is (0,Lx) x (0,Ly) with Nx x Ny mesh intervals, so the
/// interior grid carries (Nx-1)(Ny-1) unknowns per time step. Time-nodes run
/// 1..Nt; node 0 is the initial condition eliminated into the right-hand side.
struct ProblemConfig {
  double Lx = 1.0;
  double Ly = 2.0;
  double T = 1.0;
  int Nx = 16;
  int Ny = 16;
  int Nt = 100;
  double nu = 1.0;
  double omega = 1e-3;
  int Nd = 5;

  PrecondKind precond = PrecondKind::two_level;
  CoarseVariant coarse_variant = CoarseVariant::per_dof;
  TwoLevelForm two_level_form = TwoLevelForm::multiplicative;
  JhatSign jhat_sign = JhatSign::minus;
  GmresParams gmres;

  double dx() const { return Lx / Nx; }
  double dy() const { return Ly / Ny; }
  double dt() const { return T / Nt; }
  int nx_interior() const { return Nx - 1; }
  int ny_interior() const { return Ny - 1; }
  int n_sp() const { return nx_interior() * ny_interior(); }
  /// Diagonal value of the (lumped) mass matrices M_u and M_z.
  double mass_scale() const { return dt() * dx() * dy(); }
  /// Signed regularization shift sigma; the Schur surrogate's diagonal block
  /// is A - sigma*dt*I.
  double sigma() const {
    double s = (jhat_sign == JhatSign::plus) ? 1.0 : -1.0;
    return s / std::sqrt(omega);
  }

  void validate() const;
};

std::string to_string(PrecondKind k);
std::string to_string(CoarseVariant v);
std::string to_string(TwoLevelForm f);
std::string to_string(JhatSign s);

PrecondKind precond_from_string(const std::string& s);
CoarseVariant coarse_variant_from_string(const std::string& s);
TwoLevelForm two_level_form_from_string(const std::string& s);
JhatSign jhat_sign_from_string(const std::string& s);

/// Thrown on invalid problem parameters (bad divisibility, nonpositive
/// weights, ...). CLI maps it to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kktdd
