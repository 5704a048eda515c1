#include "kktdd/heat_operators.hpp"

#include <string>

namespace kktdd {

namespace {

void check_layout_span(const HeatOperators& ops, std::span<const double> v, const char* what) {
  if (v.size() != ops.layout.size()) {
    throw std::invalid_argument(std::string(what) + ": length " + std::to_string(v.size()) +
                                ", layout expects " + std::to_string(ops.layout.size()));
  }
}

BandedMatrix make_ahat(const BandedMatrix& A, double shift, double dt) {
  BandedMatrix Ahat = A;
  for (int i = 0; i < Ahat.n; ++i) Ahat.ref(i, i) -= shift * dt;
  return Ahat;
}

}  // namespace

BandedMatrix assemble_spatial_operator(const ProblemConfig& cfg) {
  cfg.validate();
  const int nx = cfg.nx_interior(), ny = cfg.ny_interior();
  const double cx = cfg.dt() * cfg.nu / (cfg.dx() * cfg.dx());
  const double cy = cfg.dt() * cfg.nu / (cfg.dy() * cfg.dy());
  // Bandwidth: y-neighbours sit nx entries away; degenerate single-row or
  // single-point grids shrink the band accordingly.
  const int bw = ny > 1 ? nx : (nx > 1 ? 1 : 0);
  BandedMatrix A = BandedMatrix::zero(nx * ny, bw, bw);
  for (int j = 1; j <= ny; ++j) {
    for (int i = 1; i <= nx; ++i) {
      const int p = (j - 1) * nx + (i - 1);
      A.ref(p, p) = 1.0 + 2.0 * cx + 2.0 * cy;
      if (i > 1) A.ref(p, p - 1) = -cx;
      if (i < nx) A.ref(p, p + 1) = -cx;
      if (j > 1) A.ref(p, p - nx) = -cy;
      if (j < ny) A.ref(p, p + nx) = -cy;
    }
  }
  return A;
}

HeatOperators::HeatOperators(const ProblemConfig& cfg)
    : config(cfg),
      layout(make_layout(cfg)),
      dt(cfg.dt()),
      mass_scale(cfg.mass_scale()),
      shift(cfg.sigma()),
      A(assemble_spatial_operator(cfg)),
      Ahat(make_ahat(A, shift, dt)),
      A_factors(A),
      Ahat_factors(Ahat) {}

void apply_J(const HeatOperators& ops, std::span<const double> u, std::span<double> out) {
  check_layout_span(ops, u, "apply_J u");
  check_layout_span(ops, out, "apply_J out");
  const int nsp = ops.layout.n_sp();
  for (int n = 1; n <= ops.layout.nt; ++n) {
    const std::size_t off = ops.layout.node_offset(n);
    band_matvec(ops.A, u.subspan(off, nsp), out.subspan(off, nsp));
    if (n > 1) {
      const std::size_t prev = ops.layout.node_offset(n - 1);
      for (int p = 0; p < nsp; ++p) out[off + p] -= u[prev + p];
    }
  }
}

void apply_JT(const HeatOperators& ops, std::span<const double> w, std::span<double> out) {
  check_layout_span(ops, w, "apply_JT w");
  check_layout_span(ops, out, "apply_JT out");
  const int nsp = ops.layout.n_sp();
  for (int n = 1; n <= ops.layout.nt; ++n) {
    const std::size_t off = ops.layout.node_offset(n);
    band_matvec_transpose(ops.A, w.subspan(off, nsp), out.subspan(off, nsp));
    if (n < ops.layout.nt) {
      const std::size_t next = ops.layout.node_offset(n + 1);
      for (int p = 0; p < nsp; ++p) out[off + p] -= w[next + p];
    }
  }
}

void apply_L(const HeatOperators& ops, std::span<const double> z, std::span<double> out) {
  check_layout_span(ops, z, "apply_L z");
  check_layout_span(ops, out, "apply_L out");
  for (std::size_t k = 0; k < z.size(); ++k) out[k] = -ops.dt * z[k];
}

void apply_LT(const HeatOperators& ops, std::span<const double> w, std::span<double> out) {
  apply_L(ops, w, out);  // L is symmetric (-dt * I per block)
}

void apply_Mu(const HeatOperators& ops, std::span<const double> u, std::span<double> out) {
  check_layout_span(ops, u, "apply_Mu u");
  check_layout_span(ops, out, "apply_Mu out");
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = ops.mass_scale * u[k];
}

void apply_Mu_inv(const HeatOperators& ops, std::span<const double> u, std::span<double> out) {
  check_layout_span(ops, u, "apply_Mu_inv u");
  check_layout_span(ops, out, "apply_Mu_inv out");
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = u[k] / ops.mass_scale;
}

void apply_Mz(const HeatOperators& ops, std::span<const double> z, std::span<double> out) {
  apply_Mu(ops, z, out);  // M_z = M_u for this problem class
}

void apply_Jhat(const HeatOperators& ops, std::span<const double> u, std::span<double> out) {
  check_layout_span(ops, u, "apply_Jhat u");
  check_layout_span(ops, out, "apply_Jhat out");
  const int nsp = ops.layout.n_sp();
  for (int n = 1; n <= ops.layout.nt; ++n) {
    const std::size_t off = ops.layout.node_offset(n);
    band_matvec(ops.Ahat, u.subspan(off, nsp), out.subspan(off, nsp));
    if (n > 1) {
      const std::size_t prev = ops.layout.node_offset(n - 1);
      for (int p = 0; p < nsp; ++p) out[off + p] -= u[prev + p];
    }
  }
}

void apply_JhatT(const HeatOperators& ops, std::span<const double> w, std::span<double> out) {
  check_layout_span(ops, w, "apply_JhatT w");
  check_layout_span(ops, out, "apply_JhatT out");
  const int nsp = ops.layout.n_sp();
  for (int n = 1; n <= ops.layout.nt; ++n) {
    const std::size_t off = ops.layout.node_offset(n);
    band_matvec_transpose(ops.Ahat, w.subspan(off, nsp), out.subspan(off, nsp));
    if (n < ops.layout.nt) {
      const std::size_t next = ops.layout.node_offset(n + 1);
      for (int p = 0; p < nsp; ++p) out[off + p] -= w[next + p];
    }
  }
}

void forward_solve_window(const HeatOperators& ops, std::span<double> b) {
  const int nsp = ops.layout.n_sp();
  if (nsp == 0 || b.size() % nsp != 0) {
    throw std::invalid_argument("forward_solve_window: length not a multiple of n_sp");
  }
  const int len = static_cast<int>(b.size()) / nsp;
  for (int k = 0; k < len; ++k) {
    auto xk = b.subspan(static_cast<std::size_t>(k) * nsp, nsp);
    if (k > 0) {
      const auto xprev = b.subspan(static_cast<std::size_t>(k - 1) * nsp, nsp);
      for (int p = 0; p < nsp; ++p) xk[p] += xprev[p];
    }
    ops.Ahat_factors.solve_in_place(xk);
  }
}

void adjoint_solve_window(const HeatOperators& ops, std::span<double> b) {
  const int nsp = ops.layout.n_sp();
  if (nsp == 0 || b.size() % nsp != 0) {
    throw std::invalid_argument("adjoint_solve_window: length not a multiple of n_sp");
  }
  const int len = static_cast<int>(b.size()) / nsp;
  for (int k = len - 1; k >= 0; --k) {
    auto xk = b.subspan(static_cast<std::size_t>(k) * nsp, nsp);
    if (k < len - 1) {
      const auto xnext = b.subspan(static_cast<std::size_t>(k + 1) * nsp, nsp);
      for (int p = 0; p < nsp; ++p) xk[p] += xnext[p];
    }
    ops.Ahat_factors.solve_transpose_in_place(xk);
  }
}

}  // namespace kktdd
