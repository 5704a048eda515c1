#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kktdd/config.hpp"
#include "kktdd/gmres.hpp"

namespace kktdd {

/// One solver run on the benchmark problem. Serial reruns of the same config
/// reproduce the iteration count exactly.
struct RunRecord {
  ProblemConfig config;
  int iterations = 0;
  bool converged = false;
  double true_final_relres = 0.0;
  double objective = 0.0;
  double setup_seconds = 0.0;
  double solve_seconds = 0.0;
};

/// Builds operators, partition and preconditioner for the benchmark problem,
/// runs GMRES and evaluates the result. Non-convergence is recorded, not an
/// error.
RunRecord run_single(const ProblemConfig& cfg);

/// run_single plus the GMRES result (history and solution), for callers that
/// need more than the record.
RunRecord run_single(const ProblemConfig& cfg, GmresResult* out_result);

/// A sweep row that never ran (e.g. Nt not divisible by the step count).
struct SkippedRun {
  ProblemConfig config;
  std::string reason;
};

struct SweepResult {
  std::vector<RunRecord> rows;      // ordered by (precond, omega, nt)
  std::vector<SkippedRun> skipped;
};

using RunProgress = std::function<void(const RunRecord&)>;

/// Fixed steps-per-subdomain weak scaling: Nd = Nt / steps for each Nt in the
/// list, crossed with the omega and preconditioner lists.
SweepResult weak_scaling_sweep(const ProblemConfig& base, int steps_per_subdomain,
                               const std::vector<int>& nt_list,
                               const std::vector<double>& omega_list,
                               const std::vector<PrecondKind>& precond_list,
                               const RunProgress& progress = {});

/// Regularization sweep at fixed Nt, Nd.
SweepResult omega_sweep(const ProblemConfig& base, int nt, int nd,
                        const std::vector<double>& omega_list,
                        const std::vector<PrecondKind>& precond_list,
                        const RunProgress& progress = {});

std::string csv_header();
std::string csv_row(const RunRecord& rec);
/// Full CSV document; skipped rows become trailing '#' comment lines.
std::string to_csv(const SweepResult& sweep);

/// JSON document for a single run (all config fields plus outcome).
std::string to_json_string(const RunRecord& rec);

/// Reads config fields from a JSON object (snake_case keys matching the CLI
/// flags); missing keys keep the passed-in defaults.
ProblemConfig config_from_json_text(const std::string& text, ProblemConfig base);

}  // namespace kktdd
