#pragma once

#include "evodd/config.hpp"
#include "evodd/interface.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace evodd {

/// Output directory: EVODD_OUTPUT_DIR when set, otherwise outputs.dir.
std::filesystem::path resolve_output_dir(const ExperimentConfig& config);

struct ExperimentResult {
  SolverReport report;
  std::filesystem::path dir;
  std::vector<std::filesystem::path> files;
};

/// Solves the monolithic reference, runs the configured interface iteration and
/// writes history.csv, summary.txt and (optionally) per-level field dumps.
ExperimentResult run_experiment(const ExperimentConfig& config);
/// Same, writing into `dir` regardless of the config and environment.
ExperimentResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& dir);

void write_history_csv(const SolverReport& report, const std::filesystem::path& path, bool wallclock = true);
void write_field_dumps(const Problem& problem, const SolverReport& report, const std::filesystem::path& dir);

struct EquivalenceResult {
  double max_abs_diff = 0.0;
  double max_rel_diff = 0.0;   ///< max_abs_diff / max |u_monolithic| (0 when u == 0)
  double monolithic_max = 0.0;
};

/// Monolithic solve versus the glued subdomain solves driven by the exact interface
/// data: Omega_1 with Dirichlet trace eta*, Omega_2 with the exchanged flux -lambda_1.
EquivalenceResult compare_dd_vs_monolithic(const Problem& problem);
EquivalenceResult compare_dd_vs_monolithic(const ExperimentConfig& config);

/// sqrt(sum_{m>=1} dt ||u_h(t_m) - u(t_m)||^2_{L2(Omega(t_m))}) against the manufactured solution.
double manufactured_error(const Problem& problem, const SpaceTimeField& u);

struct MmsRow {
  double h = 0.0;
  double dt = 0.0;
  double error = 0.0;
  double order = std::numeric_limits<double>::quiet_NaN();  ///< against the previous row
};

struct MmsTable {
  std::vector<MmsRow> spatial;   ///< h halved, dt proportional to h^2; order in h
  std::vector<MmsRow> temporal;  ///< dt halved on a fine mesh; order in dt
};

MmsTable mms_convergence_study(const ExperimentConfig& config, int levels);

}  // namespace evodd
