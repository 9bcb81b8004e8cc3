#pragma once

#include "evodd/coefficients.hpp"
#include "evodd/evolution.hpp"
#include "evodd/interface.hpp"
#include "evodd/stepping.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace evodd {

struct GeometryConfig {
  int dim = 1;
  int resolution = 64;  ///< 64 in 1D, 16 in 2D unless given
  double gamma = 0.5;
};

struct EvolutionConfig {
  EvolutionKind kind = EvolutionKind::identity;
  std::vector<double> a;
  double omega = 1.0;
  std::vector<double> b;
};

struct TimeConfig {
  double T = 1.0;
  int steps = 64;
};

struct OutputConfig {
  std::filesystem::path dir = "evodd_out";
  bool emit_fields = false;
  bool emit_history = true;
  /// When false the wallclock column is written as 0 so reruns are byte-identical.
  bool wallclock = true;
};

struct MmsConfig {
  int levels = 3;
  int base_resolution = 8;
  double dt_factor = 1.0;      ///< spatial study: steps = ceil(T / (dt_factor h^2))
  int fine_resolution = 256;   ///< temporal study mesh (1D); 2D uses fine_resolution / 8
  int base_steps = 8;
};

struct ExperimentConfig {
  GeometryConfig geometry;
  EvolutionConfig evolution;
  ProblemCoefficients coefficients;
  SourceSpec source = SourceSpec::manufactured();
  TimeConfig time;
  IterationConfig method;
  Scheme scheme = Scheme::conservative;
  OutputConfig outputs;
  MmsConfig mms;
  std::uint64_t seed = 20240601;
};

/// Parses a JSON document, fills defaults and validates every module invariant.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// JSON echo of a validated config (used in summaries).
std::string dump_config(const ExperimentConfig& config);

EvolutionMap make_evolution(const ExperimentConfig& config);
Problem make_problem(const ExperimentConfig& config);

}  // namespace evodd
