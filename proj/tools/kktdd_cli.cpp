#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kktdd/chart.hpp"
#include "kktdd/experiments.hpp"
#include "kktdd/heat_operators.hpp"

namespace {

using namespace kktdd;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << content;
}

std::vector<PrecondKind> parse_precond_list(const std::vector<std::string>& names) {
  std::vector<PrecondKind> out;
  for (const auto& name : names) out.push_back(precond_from_string(name));
  return out;
}

void warn_if_memory_heavy(const ProblemConfig& cfg) {
  const double n_kkt = 3.0 * cfg.Nt * cfg.n_sp();
  const int basis = cfg.gmres.restart ? *cfg.gmres.restart : cfg.gmres.max_iters;
  const double bytes = n_kkt * 8.0 * (basis + 2);
  if (bytes > 3.5e9) {
    std::fprintf(stderr,
                 "warning: nt=%d may need ~%.1f GB of Krylov basis at max_iters=%d; "
                 "consider --restart or a lower --max-iters\n",
                 cfg.Nt, bytes / 1e9, cfg.gmres.max_iters);
  }
}

/// Shared per-subcommand config flags; values are applied over the base
/// config only when the user passed them.
struct ConfigFlags {
  std::string config_file;
  int nt = 0, nd = 0, steps = 0, nx = 0, ny = 0, max_iters = 0, restart = 0;
  double omega = 0, nu = 0, tol = 0;
  std::string precond, coarse, form, sign;

  CLI::Option *o_nt = nullptr, *o_nd = nullptr, *o_steps = nullptr, *o_nx = nullptr,
              *o_ny = nullptr, *o_max_iters = nullptr, *o_restart = nullptr,
              *o_omega = nullptr, *o_nu = nullptr, *o_tol = nullptr, *o_precond = nullptr,
              *o_coarse = nullptr, *o_form = nullptr, *o_sign = nullptr,
              *o_config = nullptr;

  void attach(CLI::App* app, bool with_run_shape) {
    o_config = app->add_option("--config", config_file, "JSON config file (flags override)");
    if (with_run_shape) {
      o_nt = app->add_option("--nt", nt, "number of time steps");
      o_nd = app->add_option("--nd", nd, "number of time subdomains");
      o_steps = app->add_option("--steps-per-subdomain", steps,
                                "set Nd = Nt / steps (alternative to --nd)");
      o_omega = app->add_option("--omega", omega, "regularization weight");
    }
    o_nu = app->add_option("--nu", nu, "heat conductivity");
    o_nx = app->add_option("--nx", nx, "mesh intervals in x");
    o_ny = app->add_option("--ny", ny, "mesh intervals in y");
    o_precond = app->add_option("--precond", precond,
                                "none|one-level|two-level|dense-schur|true-schur");
    o_coarse = app->add_option("--coarse", coarse, "coarse variant: scalar|per-dof");
    o_form = app->add_option("--two-level-form", form,
                             "literal|multiplicative|additive");
    o_sign = app->add_option("--jhat-sign", sign, "shift sign in the Schur surrogate: plus|minus");
    o_tol = app->add_option("--tol", tol, "GMRES relative residual tolerance");
    o_max_iters = app->add_option("--max-iters", max_iters, "GMRES iteration cap");
    o_restart = app->add_option("--restart", restart, "GMRES restart length (default: none)");
  }

  ProblemConfig apply(ProblemConfig cfg) const {
    if (o_config && o_config->count()) {
      cfg = config_from_json_text(read_file(config_file), cfg);
    }
    if (o_nt && o_nt->count()) cfg.Nt = nt;
    if (o_omega && o_omega->count()) cfg.omega = omega;
    if (o_nu->count()) cfg.nu = nu;
    if (o_nx->count()) cfg.Nx = nx;
    if (o_ny->count()) cfg.Ny = ny;
    if (o_precond->count()) cfg.precond = precond_from_string(precond);
    if (o_coarse->count()) cfg.coarse_variant = coarse_variant_from_string(coarse);
    if (o_form->count()) cfg.two_level_form = two_level_form_from_string(form);
    if (o_sign->count()) cfg.jhat_sign = jhat_sign_from_string(sign);
    if (o_tol->count()) cfg.gmres.tol = tol;
    if (o_max_iters->count()) cfg.gmres.max_iters = max_iters;
    if (o_restart->count()) cfg.gmres.restart = restart;
    if (o_nd && o_nd->count()) {
      cfg.Nd = nd;
    } else if (o_steps && o_steps->count()) {
      if (steps < 1 || cfg.Nt % steps != 0) {
        throw ConfigError("Nt=" + std::to_string(cfg.Nt) +
                          " is not divisible by steps-per-subdomain=" + std::to_string(steps));
      }
      cfg.Nd = cfg.Nt / steps;
    }
    return cfg;
  }
};

std::string solution_snapshot_json(const ProblemConfig& cfg, const GmresResult& res) {
  const HeatOperators ops(cfg);
  const auto& layout = ops.layout;
  const std::size_t nb = layout.size();
  const std::span<const double> sol(res.solution);
  nlohmann::json j;
  j["nt"] = cfg.Nt;
  j["nx_interior"] = layout.nx_int;
  j["ny_interior"] = layout.ny_int;
  auto block_norm = [&](std::size_t off) {
    double acc = 0.0;
    for (std::size_t k = 0; k < nb; ++k) acc += sol[off + k] * sol[off + k];
    return std::sqrt(acc);
  };
  j["norm_u"] = block_norm(0);
  j["norm_z"] = block_norm(nb);
  j["norm_w"] = block_norm(2 * nb);
  std::vector<double> final_u(sol.begin() + layout.node_offset(layout.nt),
                              sol.begin() + layout.node_offset(layout.nt) + layout.n_sp());
  j["u_final_node"] = final_u;
  return j.dump(2);
}

int run_solve(const ConfigFlags& flags, const std::string& out_path,
              const std::string& snapshot_path) {
  ProblemConfig cfg = flags.apply(ProblemConfig{});
  cfg.validate();
  warn_if_memory_heavy(cfg);
  GmresResult res;
  const RunRecord rec = run_single(cfg, &res);
  const std::string record = to_json_string(rec);
  if (out_path.empty()) {
    std::cout << record << "\n";
  } else {
    write_file(out_path, record + "\n");
    std::fprintf(stderr, "wrote %s\n", out_path.c_str());
  }
  if (!snapshot_path.empty()) {
    write_file(snapshot_path, solution_snapshot_json(cfg, res) + "\n");
    std::fprintf(stderr, "wrote %s\n", snapshot_path.c_str());
  }
  std::fprintf(stderr, "%s: iters=%d relres=%.3e objective=%.6e\n",
               rec.converged ? "converged" : "NOT converged", rec.iterations,
               rec.true_final_relres, rec.objective);
  return 0;
}

void print_progress(const RunRecord& rec) {
  std::fprintf(stderr, "  nt=%d nd=%d omega=%g %s: iters=%d %s (%.1fs)\n", rec.config.Nt,
               rec.config.Nd, rec.config.omega, to_string(rec.config.precond).c_str(),
               rec.iterations, rec.converged ? "converged" : "not converged",
               rec.solve_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-time KKT solver for heat-equation control, preconditioned by "
               "domain decomposition in time"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "run one configuration and emit a JSON record");
  ConfigFlags solve_flags;
  solve_flags.attach(solve, true);
  std::string solve_out, snapshot_path;
  solve->add_option("--out", solve_out, "write the JSON record here (default: stdout)");
  solve->add_option("--save-solution", snapshot_path, "write a solution snapshot JSON");

  auto* weak = app.add_subcommand("weak-scaling",
                                  "iteration counts at fixed steps per subdomain");
  ConfigFlags weak_flags;
  weak_flags.attach(weak, false);
  int weak_steps = 20;
  std::vector<int> weak_nts = {100, 200, 400, 800, 1600, 3200};
  std::vector<double> weak_omegas = {1e-2, 1e-3, 1e-4};
  std::vector<std::string> weak_preconds = {"one-level", "two-level"};
  std::string weak_out = "weak_scaling.csv";
  weak->add_option("--steps-per-subdomain", weak_steps, "time steps per subdomain");
  weak->add_option("--nt-list", weak_nts, "time step counts")->delimiter(',');
  weak->add_option("--omega-list", weak_omegas, "regularization weights")->delimiter(',');
  weak->add_option("--precond-list", weak_preconds, "preconditioners")->delimiter(',');
  weak->add_option("--out", weak_out, "CSV output path");

  auto* osweep = app.add_subcommand("omega-sweep",
                                    "iteration counts across the regularization range");
  ConfigFlags osweep_flags;
  osweep_flags.attach(osweep, false);
  int osweep_nt = 400, osweep_nd = 20;
  std::vector<double> osweep_omegas = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  std::vector<std::string> osweep_preconds = {"one-level", "two-level"};
  std::string osweep_out = "omega_sweep.csv";
  osweep->add_option("--nt", osweep_nt, "number of time steps");
  osweep->add_option("--nd", osweep_nd, "number of subdomains");
  osweep->add_option("--omega-list", osweep_omegas, "regularization weights")->delimiter(',');
  osweep->add_option("--precond-list", osweep_preconds, "preconditioners")->delimiter(',');
  osweep->add_option("--out", osweep_out, "CSV output path");

  auto* chart = app.add_subcommand("chart", "render a results CSV as an SVG line chart");
  std::string chart_in, chart_out;
  chart->add_option("csv", chart_in, "input CSV")->required();
  chart->add_option("--out", chart_out, "SVG output path (default: input with .svg)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      return run_solve(solve_flags, solve_out, snapshot_path);
    }
    if (weak->parsed()) {
      ProblemConfig base = weak_flags.apply(ProblemConfig{});
      for (int nt : weak_nts) {
        ProblemConfig probe = base;
        probe.Nt = nt;
        warn_if_memory_heavy(probe);
      }
      const SweepResult sweep =
          weak_scaling_sweep(base, weak_steps, weak_nts, weak_omegas,
                             parse_precond_list(weak_preconds), print_progress);
      write_file(weak_out, to_csv(sweep));
      std::fprintf(stderr, "wrote %s (%zu rows, %zu skipped)\n", weak_out.c_str(),
                   sweep.rows.size(), sweep.skipped.size());
      return 0;
    }
    if (osweep->parsed()) {
      ProblemConfig base = osweep_flags.apply(ProblemConfig{});
      const SweepResult sweep = omega_sweep(base, osweep_nt, osweep_nd, osweep_omegas,
                                            parse_precond_list(osweep_preconds),
                                            print_progress);
      write_file(osweep_out, to_csv(sweep));
      std::fprintf(stderr, "wrote %s (%zu rows, %zu skipped)\n", osweep_out.c_str(),
                   sweep.rows.size(), sweep.skipped.size());
      return 0;
    }
    if (chart->parsed()) {
      const std::string svg = render_chart_svg(read_file(chart_in));
      std::string out = chart_out;
      if (out.empty()) {
        out = chart_in;
        const auto dotpos = out.find_last_of('.');
        if (dotpos != std::string::npos) out.resize(dotpos);
        out += ".svg";
      }
      write_file(out, svg);
      std::fprintf(stderr, "wrote %s\n", out.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
