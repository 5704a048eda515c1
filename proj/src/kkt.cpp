#include "kktdd/kkt.hpp"

#include <cmath>

#include "kktdd/linalg.hpp"
#include "kktdd/schur.hpp"

namespace kktdd {

namespace {
std::size_t checked_block(const HeatOperators& ops, std::size_t total, const char* what) {
  if (total != 3 * ops.layout.size()) {
    throw std::invalid_argument(std::string(what) + ": KKT vector length " +
                                std::to_string(total) + ", expected " +
                                std::to_string(3 * ops.layout.size()));
  }
  return ops.layout.size();
}
}  // namespace

KKTVector RhsBundle::to_kkt() const {
  KKTVector b(f_u.size());
  std::copy(f_u.begin(), f_u.end(), b.u().begin());
  std::copy(f_z.begin(), f_z.end(), b.z().begin());
  std::copy(f.begin(), f.end(), b.w().begin());
  return b;
}

RhsBundle assemble_rhs(const HeatOperators& ops, const SpatialFn& u0,
                       const SpaceTimeFn& target) {
  const auto& cfg = ops.config;
  const auto& layout = ops.layout;
  RhsBundle rhs;
  rhs.f_u = layout.zeros();
  rhs.f_z = layout.zeros();
  rhs.f = layout.zeros();
  for (int n = 1; n <= layout.nt; ++n) {
    const double t = n * ops.dt;
    for (int j = 1; j <= layout.ny_int; ++j) {
      for (int i = 1; i <= layout.nx_int; ++i) {
        const double x = i * cfg.dx(), y = j * cfg.dy();
        rhs.f_u[layout.index(n, i, j)] = ops.mass_scale * target(x, y, t);
        if (n == 1) rhs.f[layout.index(n, i, j)] = u0(x, y);
      }
    }
  }
  return rhs;
}

void apply_K(const HeatOperators& ops, std::span<const double> v, std::span<double> out) {
  const std::size_t nb = checked_block(ops, v.size(), "apply_K v");
  checked_block(ops, out.size(), "apply_K out");
  const double omega = ops.config.omega;
  const auto u = v.subspan(0, nb), z = v.subspan(nb, nb), w = v.subspan(2 * nb, nb);
  auto ou = out.subspan(0, nb), oz = out.subspan(nb, nb), ow = out.subspan(2 * nb, nb);

  // u-row: M_u u + J^T w
  apply_JT(ops, w, ou);
  for (std::size_t k = 0; k < nb; ++k) ou[k] += ops.mass_scale * u[k];
  // z-row: omega M_z z + L^T w
  for (std::size_t k = 0; k < nb; ++k) oz[k] = omega * ops.mass_scale * z[k] - ops.dt * w[k];
  // w-row: J u + L z
  apply_J(ops, u, ow);
  for (std::size_t k = 0; k < nb; ++k) ow[k] -= ops.dt * z[k];
}

void apply_K(const HeatOperators& ops, const KKTVector& v, KKTVector& out) {
  apply_K(ops, std::span<const double>(v.data), std::span<double>(out.data));
}

void apply_P_inv(const HeatOperators& ops, const SchurSolver& schur,
                 std::span<const double> r, std::span<double> out) {
  const std::size_t nb = checked_block(ops, r.size(), "apply_P_inv r");
  checked_block(ops, out.size(), "apply_P_inv out");
  const double omega = ops.config.omega;
  for (std::size_t k = 0; k < nb; ++k) out[k] = r[k] / ops.mass_scale;
  for (std::size_t k = 0; k < nb; ++k) {
    out[nb + k] = r[nb + k] / (omega * ops.mass_scale);
  }
  schur.apply(r.subspan(2 * nb, nb), out.subspan(2 * nb, nb));
}

void apply_P_inv(const HeatOperators& ops, const SchurSolver& schur, const KKTVector& r,
                 KKTVector& out) {
  apply_P_inv(ops, schur, std::span<const double>(r.data), std::span<double>(out.data));
}

double evaluate_objective(const HeatOperators& ops, std::span<const double> u,
                          std::span<const double> z, const SpaceTimeFn& target) {
  const auto& cfg = ops.config;
  const auto& layout = ops.layout;
  if (u.size() != layout.size() || z.size() != layout.size()) {
    throw std::invalid_argument("evaluate_objective: layout mismatch");
  }
  double misfit = 0.0;
  for (int n = 1; n <= layout.nt; ++n) {
    const double t = n * ops.dt;
    for (int j = 1; j <= layout.ny_int; ++j) {
      for (int i = 1; i <= layout.nx_int; ++i) {
        const double d = u[layout.index(n, i, j)] - target(i * cfg.dx(), j * cfg.dy(), t);
        misfit += d * d;
      }
    }
  }
  double control = 0.0;
  for (double v : z) control += v * v;
  return 0.5 * ops.mass_scale * misfit + 0.5 * cfg.omega * ops.mass_scale * control;
}

double kkt_residual(const HeatOperators& ops, const KKTVector& v, const RhsBundle& rhs) {
  checked_block(ops, v.data.size(), "kkt_residual v");
  KKTVector kv(v.block);
  apply_K(ops, v, kv);
  const KKTVector b = rhs.to_kkt();
  if (b.block != v.block) throw std::invalid_argument("kkt_residual: rhs layout mismatch");
  double rnorm2 = 0.0, bnorm2 = 0.0;
  for (std::size_t k = 0; k < b.data.size(); ++k) {
    const double d = b.data[k] - kv.data[k];
    rnorm2 += d * d;
    bnorm2 += b.data[k] * b.data[k];
  }
  const double r = std::sqrt(rnorm2);
  return bnorm2 > 0.0 ? r / std::sqrt(bnorm2) : r;
}

}  // namespace kktdd
