#include "kktdd/gmres.hpp"

#include <algorithm>
#include <cmath>

#include "kktdd/linalg.hpp"

namespace kktdd {

namespace {

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

GmresResult gmres_solve(const LinearMap& apply_operator,
                        const LinearMap& apply_preconditioner, std::span<const double> b,
                        const GmresParams& params) {
  if (!(params.tol > 0) || params.max_iters < 1) {
    throw std::invalid_argument("gmres: tol must be > 0 and max_iters >= 1");
  }
  const std::size_t n = b.size();
  GmresResult result;
  result.solution.assign(n, 0.0);

  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    result.converged = true;
    return result;
  }

  const bool have_prec = static_cast<bool>(apply_preconditioner);
  std::vector<double> x(n, 0.0);
  std::vector<double> scratch(n), r(n);
  int total_iters = 0;
  bool converged = false;
  bool first_cycle = true;

  while (total_iters < params.max_iters && !converged) {
    // Cycle residual. The initial guess is exactly zero, so the first cycle
    // starts from b without a matvec.
    if (first_cycle) {
      std::copy(b.begin(), b.end(), r.begin());
      first_cycle = false;
    } else {
      apply_operator(x, scratch);
      for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - scratch[k];
    }
    double beta = norm2(r);
    if (beta / bnorm <= params.tol) {
      converged = true;
      break;
    }

    const int cycle = params.restart ? std::min(*params.restart, params.max_iters - total_iters)
                                     : params.max_iters - total_iters;
    std::vector<std::vector<double>> basis;
    basis.reserve(cycle + 1);
    {
      std::vector<double> v0(r);
      for (double& v : v0) v /= beta;
      basis.push_back(std::move(v0));
    }
    // Column-major Hessenberg, rotated in place to upper triangular.
    std::vector<std::vector<double>> H;
    std::vector<double> g(cycle + 1, 0.0), cs(cycle, 0.0), sn(cycle, 0.0);
    g[0] = beta;

    int k = 0;  // accepted Krylov directions this cycle
    bool happy = false;
    std::vector<double> w(n), z(n);
    for (int j = 0; j < cycle; ++j) {
      if (have_prec) {
        apply_preconditioner(basis[j], z);
        apply_operator(z, w);
      } else {
        apply_operator(basis[j], w);
      }
      if (!all_finite(w)) {
        throw GmresDivergenceError(
            "gmres: non-finite values in Krylov vector at iteration " +
                std::to_string(total_iters + 1),
            total_iters + 1);
      }
      H.emplace_back(j + 2, 0.0);
      auto& h = H[j];
      for (int i = 0; i <= j; ++i) {
        h[i] = dot(w, basis[i]);
        axpy(-h[i], basis[i], w);
      }
      h[j + 1] = norm2(w);

      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * h[i] + sn[i] * h[i + 1];
        h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
        h[i] = t;
      }
      const double denom = std::hypot(h[j], h[j + 1]);
      cs[j] = h[j] / denom;
      sn[j] = h[j + 1] / denom;
      h[j] = denom;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];

      ++total_iters;
      ++k;
      const double relest = std::abs(g[j + 1]) / bnorm;
      result.residual_history.push_back(relest);

      happy = h[j + 1] <= params.happy_breakdown_tol;
      if (relest <= params.tol || happy) {
        converged = true;
        break;
      }
      if (j + 1 < cycle) {
        std::vector<double> v(w);
        for (double& val : v) val /= h[j + 1];
        basis.push_back(std::move(v));
      }
    }

    // Least-squares update: back substitution on the rotated Hessenberg.
    std::vector<double> y(k, 0.0);
    for (int i = k - 1; i >= 0; --i) {
      double acc = g[i];
      for (int j2 = i + 1; j2 < k; ++j2) acc -= H[j2][i] * y[j2];
      y[i] = acc / H[i][i];
    }
    std::fill(scratch.begin(), scratch.end(), 0.0);
    for (int i = 0; i < k; ++i) axpy(y[i], basis[i], scratch);
    if (have_prec) {
      apply_preconditioner(scratch, z);
      axpy(1.0, z, x);
    } else {
      axpy(1.0, scratch, x);
    }
  }

  result.solution = x;
  result.converged = converged;
  result.iterations = static_cast<int>(result.residual_history.size());
  apply_operator(x, scratch);
  double rnorm2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = b[i] - scratch[i];
    rnorm2 += d * d;
  }
  result.true_final_relres = std::sqrt(rnorm2) / bnorm;
  return result;
}

}  // namespace kktdd
