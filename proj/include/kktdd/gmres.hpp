#pragma once

#include <functional>
#include <span>
#include <vector>

#include "kktdd/config.hpp"

namespace kktdd {

using LinearMap = std::function<void(std::span<const double>, std::span<double>)>;

struct GmresResult {
  std::vector<double> solution;
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_history;  // estimated relative residual per iteration
  double true_final_relres = 0.0;        // recomputed ||b - A x|| / ||b||
};

/// Thrown when non-finite values appear in the Krylov basis.
class GmresDivergenceError : public std::runtime_error {
 public:
  GmresDivergenceError(const std::string& what, int iteration)
      : std::runtime_error(what), iteration(iteration) {}
  int iteration;
};

/// Right-preconditioned GMRES (Arnoldi with modified Gram-Schmidt, Givens
/// rotations) from a zero initial guess. Solves A M^{-1} y = b, x = M^{-1} y,
/// so the rotation-based residual estimate tracks the true residual of
/// A x = b. Full (non-restarted) unless params.restart is set. An empty
/// preconditioner map means the identity.
GmresResult gmres_solve(const LinearMap& apply_operator,
                        const LinearMap& apply_preconditioner, std::span<const double> b,
                        const GmresParams& params);

}  // namespace kktdd
