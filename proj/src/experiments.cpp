#include "kktdd/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include <json.hpp>

#include "kktdd/heat_operators.hpp"
#include "kktdd/kkt.hpp"
#include "kktdd/model_problem.hpp"
#include "kktdd/schur.hpp"
#include "kktdd/time_partition.hpp"

namespace kktdd {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

RunRecord run_single(const ProblemConfig& cfg) { return run_single(cfg, nullptr); }

RunRecord run_single(const ProblemConfig& cfg, GmresResult* out_result) {
  cfg.validate();
  RunRecord rec;
  rec.config = cfg;

  const auto t_setup = std::chrono::steady_clock::now();
  const HeatOperators ops(cfg);
  const TimePartition part = build_time_partition(cfg.Nt, cfg.Nd);
  const SchurSolver schur = make_schur_solver(ops, part, cfg);
  const RhsBundle rhs = assemble_rhs(ops, model_initial_condition, model_target);
  const KKTVector b = rhs.to_kkt();
  rec.setup_seconds = seconds_since(t_setup);

  const LinearMap op = [&](std::span<const double> v, std::span<double> out) {
    apply_K(ops, v, out);
  };
  LinearMap prec;
  if (cfg.precond != PrecondKind::none) {
    prec = [&](std::span<const double> v, std::span<double> out) {
      apply_P_inv(ops, schur, v, out);
    };
  }

  const auto t_solve = std::chrono::steady_clock::now();
  GmresResult res = gmres_solve(op, prec, b.data, cfg.gmres);
  rec.solve_seconds = seconds_since(t_solve);

  rec.iterations = res.iterations;
  rec.converged = res.converged;
  rec.true_final_relres = res.true_final_relres;
  const std::size_t nb = ops.layout.size();
  const std::span<const double> sol(res.solution);
  rec.objective =
      evaluate_objective(ops, sol.subspan(0, nb), sol.subspan(nb, nb), model_target);
  if (out_result) *out_result = std::move(res);
  return rec;
}

namespace {

SweepResult run_grid(const std::vector<ProblemConfig>& grid,
                     const std::vector<SkippedRun>& pre_skipped,
                     const RunProgress& progress) {
  SweepResult sweep;
  sweep.skipped = pre_skipped;
  for (const ProblemConfig& cfg : grid) {
    try {
      sweep.rows.push_back(run_single(cfg));
      if (progress) progress(sweep.rows.back());
    } catch (const std::exception& e) {
      sweep.skipped.push_back({cfg, e.what()});
    }
  }
  std::sort(sweep.rows.begin(), sweep.rows.end(), [](const RunRecord& a, const RunRecord& b) {
    const auto key = [](const RunRecord& r) {
      return std::make_tuple(to_string(r.config.precond), r.config.omega, r.config.Nt);
    };
    return key(a) < key(b);
  });
  return sweep;
}

}  // namespace

SweepResult weak_scaling_sweep(const ProblemConfig& base, int steps_per_subdomain,
                               const std::vector<int>& nt_list,
                               const std::vector<double>& omega_list,
                               const std::vector<PrecondKind>& precond_list,
                               const RunProgress& progress) {
  if (steps_per_subdomain < 1) throw ConfigError("steps per subdomain must be >= 1");
  std::vector<ProblemConfig> grid;
  std::vector<SkippedRun> skipped;
  for (PrecondKind precond : precond_list) {
    for (double omega : omega_list) {
      for (int nt : nt_list) {
        ProblemConfig cfg = base;
        cfg.Nt = nt;
        cfg.omega = omega;
        cfg.precond = precond;
        if (nt % steps_per_subdomain != 0) {
          cfg.Nd = 1;
          skipped.push_back({cfg, "Nt=" + std::to_string(nt) + " not divisible by steps=" +
                                      std::to_string(steps_per_subdomain)});
          continue;
        }
        cfg.Nd = nt / steps_per_subdomain;
        grid.push_back(cfg);
      }
    }
  }
  return run_grid(grid, skipped, progress);
}

SweepResult omega_sweep(const ProblemConfig& base, int nt, int nd,
                        const std::vector<double>& omega_list,
                        const std::vector<PrecondKind>& precond_list,
                        const RunProgress& progress) {
  std::vector<ProblemConfig> grid;
  for (PrecondKind precond : precond_list) {
    for (double omega : omega_list) {
      ProblemConfig cfg = base;
      cfg.Nt = nt;
      cfg.Nd = nd;
      cfg.omega = omega;
      cfg.precond = precond;
      grid.push_back(cfg);
    }
  }
  return run_grid(grid, {}, progress);
}

std::string csv_header() {
  return "nt,nd,steps_per_subdomain,omega,precond,coarse_variant,two_level_form,jhat_sign,"
         "iters,converged,final_relres,objective,setup_s,solve_s";
}

std::string csv_row(const RunRecord& rec) {
  const ProblemConfig& c = rec.config;
  std::string row;
  row += std::to_string(c.Nt) + ',';
  row += std::to_string(c.Nd) + ',';
  row += std::to_string(c.Nt / c.Nd) + ',';
  row += fmt(c.omega) + ',';
  row += to_string(c.precond) + ',';
  row += to_string(c.coarse_variant) + ',';
  row += to_string(c.two_level_form) + ',';
  row += to_string(c.jhat_sign) + ',';
  row += std::to_string(rec.iterations) + ',';
  row += rec.converged ? "true," : "false,";
  row += fmt(rec.true_final_relres) + ',';
  row += fmt(rec.objective) + ',';
  row += fmt(rec.setup_seconds, "%.3f") + ',';
  row += fmt(rec.solve_seconds, "%.3f");
  return row;
}

std::string to_csv(const SweepResult& sweep) {
  std::string out = csv_header() + '\n';
  for (const RunRecord& rec : sweep.rows) out += csv_row(rec) + '\n';
  for (const SkippedRun& s : sweep.skipped) {
    out += "# skipped nt=" + std::to_string(s.config.Nt) + " omega=" + fmt(s.config.omega) +
           " precond=" + to_string(s.config.precond) + ": " + s.reason + '\n';
  }
  return out;
}

std::string to_json_string(const RunRecord& rec) {
  const ProblemConfig& c = rec.config;
  nlohmann::json j;
  j["lx"] = c.Lx;
  j["ly"] = c.Ly;
  j["t_final"] = c.T;
  j["nx"] = c.Nx;
  j["ny"] = c.Ny;
  j["nt"] = c.Nt;
  j["nu"] = c.nu;
  j["omega"] = c.omega;
  j["nd"] = c.Nd;
  j["precond"] = to_string(c.precond);
  j["coarse_variant"] = to_string(c.coarse_variant);
  j["two_level_form"] = to_string(c.two_level_form);
  j["jhat_sign"] = to_string(c.jhat_sign);
  j["tol"] = c.gmres.tol;
  j["max_iters"] = c.gmres.max_iters;
  if (c.gmres.restart) {
    j["restart"] = *c.gmres.restart;
  } else {
    j["restart"] = nullptr;
  }
  j["iterations"] = rec.iterations;
  j["converged"] = rec.converged;
  j["true_final_relres"] = rec.true_final_relres;
  j["objective"] = rec.objective;
  j["setup_seconds"] = rec.setup_seconds;
  j["solve_seconds"] = rec.solve_seconds;
  return j.dump(2);
}

ProblemConfig config_from_json_text(const std::string& text, ProblemConfig base) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  try {
    if (j.contains("lx")) base.Lx = j["lx"].get<double>();
    if (j.contains("ly")) base.Ly = j["ly"].get<double>();
    if (j.contains("t_final")) base.T = j["t_final"].get<double>();
    if (j.contains("nx")) base.Nx = j["nx"].get<int>();
    if (j.contains("ny")) base.Ny = j["ny"].get<int>();
    if (j.contains("nt")) base.Nt = j["nt"].get<int>();
    if (j.contains("nu")) base.nu = j["nu"].get<double>();
    if (j.contains("omega")) base.omega = j["omega"].get<double>();
    if (j.contains("nd")) base.Nd = j["nd"].get<int>();
    if (j.contains("precond")) base.precond = precond_from_string(j["precond"].get<std::string>());
    if (j.contains("coarse_variant")) {
      base.coarse_variant = coarse_variant_from_string(j["coarse_variant"].get<std::string>());
    }
    if (j.contains("two_level_form")) {
      base.two_level_form = two_level_form_from_string(j["two_level_form"].get<std::string>());
    }
    if (j.contains("jhat_sign")) {
      base.jhat_sign = jhat_sign_from_string(j["jhat_sign"].get<std::string>());
    }
    if (j.contains("tol")) base.gmres.tol = j["tol"].get<double>();
    if (j.contains("max_iters")) base.gmres.max_iters = j["max_iters"].get<int>();
    if (j.contains("restart") && !j["restart"].is_null()) {
      base.gmres.restart = j["restart"].get<int>();
    }
  } catch (const nlohmann::json::type_error& e) {
    throw ConfigError(std::string("config file field has wrong type: ") + e.what());
  }
  return base;
}

}  // namespace kktdd
