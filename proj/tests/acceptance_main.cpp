// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "kktdd/experiments.hpp"
#include "kktdd/heat_operators.hpp"
#include "kktdd/kkt.hpp"
#include "kktdd/model_problem.hpp"
#include "kktdd/schur.hpp"
#include "kktdd/time_partition.hpp"

using namespace kktdd;

namespace {

struct Reporter {
  int failed = 0;

  void report(int id, const std::string& name, bool ok, double seconds,
              const std::string& detail) {
    std::printf("[%s] %2d %-28s (%7.2f s) %s\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                seconds, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
  }

  template <typename Fn>
  void run(int id, const std::string& name, double time_limit, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
      ok = fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count();
    if (time_limit > 0 && secs > time_limit) {
      ok = false;
      detail += " [exceeded " + std::to_string(time_limit) + " s budget]";
    }
    report(id, name, ok, secs, detail);
  }
};

ProblemConfig desk(int nt, int nd, int nx, int ny, double omega) {
  ProblemConfig cfg;
  cfg.Nt = nt;
  cfg.Nd = nd;
  cfg.Nx = nx;
  cfg.Ny = ny;
  cfg.omega = omega;
  return cfg;
}

double max_abs_entry(const DenseMatrix& m) {
  double best = 0.0;
  for (double v : m.data) best = std::max(best, std::abs(v));
  return best;
}

SpaceTimeVector zero_control_state(const HeatOperators& ops, const RhsBundle& rhs) {
  const int nsp = ops.layout.n_sp();
  SpaceTimeVector u = ops.layout.zeros();
  std::vector<double> step(nsp);
  for (int n = 1; n <= ops.layout.nt; ++n) {
    const std::size_t off = ops.layout.node_offset(n);
    for (int p = 0; p < nsp; ++p) {
      step[p] = rhs.f[off + p];
      if (n > 1) step[p] += u[ops.layout.node_offset(n - 1) + p];
    }
    ops.A_factors.solve_in_place(step);
    std::copy(step.begin(), step.end(), u.begin() + off);
  }
  return u;
}

bool criterion_ellipticity(std::string& detail) {
  const double dt = 0.1;
  const double off = -1.0 + dt;
  const double lower[3][3] = {{1, 0, 0}, {off, 1, 0}, {0, off, 1}};
  double prod[3][3] = {};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) prod[i][j] += lower[i][k] * lower[j][k];  // L * L^T
  const double d_off = -(1.0 - dt);
  const double d_diag = 2.0 * (1.0 - dt) + dt * dt;
  const double want[3][3] = {{1, d_off, 0}, {d_off, d_diag, d_off}, {0, d_off, d_diag}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (prod[i][j] != want[i][j]) {
        detail = "entry (" + std::to_string(i) + "," + std::to_string(j) + ") differs";
        return false;
      }
  detail = "bidiagonal product equals the closed-form stencil exactly";
  return true;
}

bool criterion_subdomain_identity(std::string& detail) {
  const std::vector<std::tuple<int, int, int>> cases = {{9, 3, 2}, {9, 3, 3}, {12, 4, 4}};
  double worst = 0.0;
  for (const auto& [nt, nd, nx] : cases) {
    HeatOperators ops(desk(nt, nd, nx, nx, 1e-2));
    const auto part = build_time_partition(nt, nd);
    const double scale = max_abs_entry(assemble_dense_shat(ops));
    for (int s = 0; s < nd; ++s) {
      const double err = verify_subdomain_identity(ops, part, s) / scale;
      worst = std::max(worst, err);
      if (err > 1e-12) {
        detail = "nt=" + std::to_string(nt) + " s=" + std::to_string(s) +
                 " relative error " + std::to_string(err);
        return false;
      }
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max scaled error %.2e", worst);
  detail = buf;
  return true;
}

bool criterion_murphy(std::string& detail) {
  detail.clear();
  for (double omega : {1e-2, 1e-4}) {
    ProblemConfig cfg = desk(4, 1, 3, 3, omega);
    cfg.gmres.tol = 1e-10;
    HeatOperators ops(cfg);
    const auto schur = SchurSolver::make_dense_true(ops);
    const auto rhs = assemble_rhs(ops, model_initial_condition, model_target);
    const auto b = rhs.to_kkt();
    const auto res = gmres_solve(
        [&](std::span<const double> v, std::span<double> out) { apply_K(ops, v, out); },
        [&](std::span<const double> v, std::span<double> out) {
          apply_P_inv(ops, schur, v, out);
        },
        b.data, cfg.gmres);
    if (!res.converged || res.iterations > 3) {
      detail = "omega=" + std::to_string(omega) + ": " + std::to_string(res.iterations) +
               " iterations";
      return false;
    }
    detail += "omega=" + std::to_string(omega) + ": " + std::to_string(res.iterations) +
              " iters  ";
  }
  return true;
}

bool criterion_rasq_degeneracy(std::string& detail) {
  HeatOperators ops(desk(6, 1, 4, 4, 1e-2));
  const auto part = build_time_partition(6, 1);
  std::mt19937 rng(2025);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  SpaceTimeVector r(ops.layout.size());
  for (double& v : r) v = dist(rng);
  const auto got = apply_rasq(ops, part, r);
  const auto dense = SchurSolver::make_dense_shat(ops);
  SpaceTimeVector want(r.size());
  dense.apply(r, want);
  double dn = 0.0, wn = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    dn += (got[k] - want[k]) * (got[k] - want[k]);
    wn += want[k] * want[k];
  }
  const double rel = std::sqrt(dn / wn);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "relative difference %.2e", rel);
  detail = buf;
  return rel <= 1e-10;
}

bool criterion_property_suites(std::string& detail) {
  std::mt19937 rng(777);
  std::uniform_int_distribution<int> ndd(1, 8), md(1, 6), meshd(2, 4);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  // Partition-of-unity identity, 100 randomized cases, exact.
  for (int trial = 0; trial < 100; ++trial) {
    const int nd = ndd(rng), nt = nd * md(rng);
    SpaceTimeLayout layout{nt, meshd(rng) - 1, meshd(rng) - 1};
    const auto part = build_time_partition(nt, nd);
    SpaceTimeVector v(layout.size());
    for (double& x : v) x = dist(rng);
    SpaceTimeVector sum = layout.zeros();
    for (int s = 0; s < nd; ++s) {
      auto sub = restrict_to_subdomain(layout, part, s, v);
      apply_ownership_mask(layout, part, s, sub);
      auto up = prolong_from_subdomain(layout, part, s, sub);
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += up[k];
    }
    for (std::size_t k = 0; k < sum.size(); ++k) {
      if (sum[k] != v[k]) {
        detail = "partition-of-unity trial " + std::to_string(trial) + " not exact";
        return false;
      }
    }
  }

  // Adjoint pairing for operators and window solves, 100 randomized cases.
  std::uniform_int_distribution<int> ntd(1, 8);
  for (int trial = 0; trial < 100; ++trial) {
    ProblemConfig cfg = desk(ntd(rng), 1, meshd(rng), meshd(rng),
                             std::pow(10.0, -1.0 - 3.0 * std::abs(dist(rng))));
    HeatOperators ops(cfg);
    const std::size_t n = ops.layout.size();
    std::vector<double> x(n), y(n), ax(n), aty(n);
    for (double& v : x) v = dist(rng);
    for (double& v : y) v = dist(rng);
    const auto check_pair = [&](auto&& fwd, auto&& adj, const char* what) {
      fwd(std::span<const double>(x), std::span<double>(ax));
      adj(std::span<const double>(y), std::span<double>(aty));
      const double lhs = dot(ax, y), rhs = dot(x, aty);
      if (std::abs(lhs - rhs) > 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1.0)) {
        detail = std::string(what) + " pairing failed at trial " + std::to_string(trial);
        return false;
      }
      return true;
    };
    if (!check_pair([&](auto a, auto b) { apply_J(ops, a, b); },
                    [&](auto a, auto b) { apply_JT(ops, a, b); }, "J"))
      return false;
    if (!check_pair([&](auto a, auto b) { apply_L(ops, a, b); },
                    [&](auto a, auto b) { apply_LT(ops, a, b); }, "L"))
      return false;
    if (!check_pair([&](auto a, auto b) { apply_Jhat(ops, a, b); },
                    [&](auto a, auto b) { apply_JhatT(ops, a, b); }, "Jhat"))
      return false;
    // Window solves: <Jhat^{-1} b, c> = <b, Jhat^{-T} c>.
    std::vector<double> fb(x), ac(y);
    forward_solve_window(ops, fb);
    adjoint_solve_window(ops, ac);
    const double lhs = dot(fb, y), rhs = dot(x, ac);
    if (std::abs(lhs - rhs) > 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1.0)) {
      detail = "window-solve pairing failed at trial " + std::to_string(trial);
      return false;
    }
  }
  detail = "200 randomized property cases";
  return true;
}

struct IterationTable {
  // omega -> nt -> iterations
  std::map<double, std::map<int, RunRecord>> cells;

  void insert(const RunRecord& rec) { cells[rec.config.omega][rec.config.Nt] = rec; }
};

void progress(const RunRecord& rec) {
  std::fprintf(stderr, "    nt=%d nd=%d omega=%g %s: iters=%d %s (%.1f s)\n", rec.config.Nt,
               rec.config.Nd, rec.config.omega, to_string(rec.config.precond).c_str(),
               rec.iterations, rec.converged ? "ok" : "NOT CONVERGED", rec.solve_seconds);
}

}  // namespace

int main() {
  Reporter rep;
  std::vector<RunRecord> all_runs;

  rep.run(1, "ellipticity-fixture", 1.0, criterion_ellipticity);
  rep.run(2, "subdomain-identity", 10.0, criterion_subdomain_identity);
  rep.run(3, "murphy-true-schur", 10.0, criterion_murphy);
  rep.run(4, "rasq-degeneracy", 10.0, criterion_rasq_degeneracy);
  rep.run(5, "property-suites", 30.0, criterion_property_suites);

  // Shared sweep for criteria 6 and 7: 17x17 mesh, 20 steps per subdomain,
  // documented default coarse variant and jhat sign (the config defaults).
  ProblemConfig base;
  base.Nx = 16;
  base.Ny = 16;
  base.gmres.tol = 1e-6;
  base.gmres.max_iters = 420;
  const std::vector<int> nts = {100, 200, 400, 800};
  const std::vector<double> omegas = {1e-2, 1e-3, 1e-4};

  std::fprintf(stderr, "  [criteria 6+7] weak-scaling sweep, %s coarse space, %s sign\n",
               to_string(base.coarse_variant).c_str(), to_string(base.jhat_sign).c_str());
  IterationTable two_level, one_level;
  {
    const auto sweep = weak_scaling_sweep(
        base, 20, nts, omegas, {PrecondKind::two_level, PrecondKind::one_level}, progress);
    for (const auto& rec : sweep.rows) {
      all_runs.push_back(rec);
      if (rec.config.precond == PrecondKind::two_level) two_level.insert(rec);
      if (rec.config.precond == PrecondKind::one_level) one_level.insert(rec);
    }
  }

  rep.run(6, "weak-scaling-flatness", 0, [&](std::string& detail) {
    detail.clear();
    for (double omega : omegas) {
      const auto& row = two_level.cells[omega];
      if (row.size() != nts.size()) {
        detail = "missing rows";
        return false;
      }
      int lo = 1 << 30, hi = 0;
      for (const auto& [nt, rec] : row) {
        if (!rec.converged) {
          detail = "nt=" + std::to_string(nt) + " omega=" + std::to_string(omega) +
                   " did not converge";
          return false;
        }
        lo = std::min(lo, rec.iterations);
        hi = std::max(hi, rec.iterations);
      }
      char buf[64];
      std::snprintf(buf, sizeof(buf), "omega=%g: %d..%d  ", omega, lo, hi);
      detail += buf;
      if (hi > 1.5 * lo) {
        detail += "(ratio above 1.5)";
        return false;
      }
    }
    return true;
  });

  rep.run(7, "one-level-growth", 0, [&](std::string& detail) {
    detail.clear();
    for (double omega : omegas) {
      const auto& row = one_level.cells[omega];
      if (row.size() != nts.size()) {
        detail = "missing rows";
        return false;
      }
      // Non-converged runs sit at the 420 cap and count as growth.
      int prev = 0;
      for (const auto& [nt, rec] : row) {
        if (rec.iterations < prev) {
          detail = "omega=" + std::to_string(omega) + ": iterations decreased at nt=" +
                   std::to_string(nt);
          return false;
        }
        prev = rec.iterations;
      }
      const RunRecord& first = row.at(100);
      const RunRecord& last = row.at(800);
      const bool grew = last.iterations >= 1.5 * first.iterations || !last.converged;
      char buf[80];
      std::snprintf(buf, sizeof(buf), "omega=%g: %d->%d%s  ", omega, first.iterations,
                    last.iterations, last.converged ? "" : " (cap)");
      detail += buf;
      if (!grew) {
        detail += "(no growth)";
        return false;
      }
    }
    return true;
  });

  std::fprintf(stderr, "  [criterion 8] omega sweep at nt=400 nd=20\n");
  const std::vector<double> omega_range = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  SweepResult omega_rows = omega_sweep(base, 400, 20, omega_range,
                                       {PrecondKind::two_level, PrecondKind::one_level},
                                       progress);
  for (const auto& rec : omega_rows.rows) all_runs.push_back(rec);

  rep.run(8, "omega-robustness", 0, [&](std::string& detail) {
    int lo = 1 << 30, hi = 0;
    int one_nonconv = 0, one_lo = 1 << 30, one_hi = 0;
    for (const auto& rec : omega_rows.rows) {
      if (rec.config.precond == PrecondKind::two_level) {
        if (!rec.converged) {
          detail = "two-level omega=" + std::to_string(rec.config.omega) + " not converged";
          return false;
        }
        lo = std::min(lo, rec.iterations);
        hi = std::max(hi, rec.iterations);
      } else {
        if (!rec.converged) {
          ++one_nonconv;
        } else {
          one_lo = std::min(one_lo, rec.iterations);
          one_hi = std::max(one_hi, rec.iterations);
        }
      }
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "two-level %d..%d, one-level nonconv=%d range %d..%d",
                  lo, hi, one_nonconv, one_lo == (1 << 30) ? 0 : one_lo, one_hi);
    detail = buf;
    if (hi > 2.0 * lo) {
      detail += " (two-level ratio above 2)";
      return false;
    }
    const bool one_shows_sensitivity = one_nonconv >= 1 || one_hi >= 3 * one_lo;
    if (!one_shows_sensitivity) {
      detail += " (one-level unexpectedly flat)";
      return false;
    }
    return true;
  });

  std::fprintf(stderr, "  [criterion 9] mesh sweep at nt=100 nd=5 omega=1e-3\n");
  rep.run(9, "mesh-insensitivity", 0, [&](std::string& detail) {
    int lo = 1 << 30, hi = 0;
    detail.clear();
    for (int mesh : {8, 16, 32}) {
      ProblemConfig cfg = base;
      cfg.Nx = mesh;
      cfg.Ny = mesh;
      cfg.Nt = 100;
      cfg.Nd = 5;
      cfg.omega = 1e-3;
      cfg.precond = PrecondKind::two_level;
      const RunRecord rec = run_single(cfg);
      progress(rec);
      all_runs.push_back(rec);
      if (!rec.converged) {
        detail = "mesh " + std::to_string(mesh + 1) + " did not converge";
        return false;
      }
      lo = std::min(lo, rec.iterations);
      hi = std::max(hi, rec.iterations);
      detail += std::to_string(mesh + 1) + "x" + std::to_string(mesh + 1) + ":" +
                std::to_string(rec.iterations) + "  ";
    }
    if (hi > 1.2 * lo) {
      detail += "(spread above 20%)";
      return false;
    }
    return true;
  });

  rep.run(10, "solution-verification", 0, [&](std::string& detail) {
    int checked = 0;
    for (const auto& rec : all_runs) {
      if (!rec.converged) continue;
      ++checked;
      if (rec.true_final_relres > 1e-5) {
        detail = "relres " + std::to_string(rec.true_final_relres) + " at nt=" +
                 std::to_string(rec.config.Nt);
        return false;
      }
      const HeatOperators ops(rec.config);
      const auto rhs = assemble_rhs(ops, model_initial_condition, model_target);
      const SpaceTimeVector u_ref = zero_control_state(ops, rhs);
      const double obj_ref =
          evaluate_objective(ops, u_ref, ops.layout.zeros(), model_target);
      if (rec.objective > obj_ref * (1.0 + 1e-8)) {
        detail = "objective above the zero-control reference at nt=" +
                 std::to_string(rec.config.Nt) +
                 " omega=" + std::to_string(rec.config.omega);
        return false;
      }
    }
    detail = std::to_string(checked) + " converged runs verified";
    return checked > 0;
  });

  std::printf("%s\n", rep.failed == 0 ? "acceptance: all criteria passed"
                                      : "acceptance: FAILURES present");
  return rep.failed == 0 ? 0 : 1;
}
