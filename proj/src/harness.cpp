#include "evodd/harness.hpp"

#include "evodd/error.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace evodd {

namespace {

constexpr const char* kModule = "harness";

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::configuration, kModule, "cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

void write_summary(const ExperimentConfig& config, const SolverReport& report, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "status: " << to_string(report.status) << "\n";
  out << "method: " << to_string(report.method) << "\n";
  out << "iterations: " << report.iterations << "\n";
  out << "max_nodal_diff: " << report.max_nodal_diff << "\n";
  out << "crosscheck_max: " << report.crosscheck_max << "\n";
  if (!report.glue_message.empty()) out << "glue_message: " << report.glue_message << "\n";
  out << "config: " << dump_config(config) << "\n";
}

}  // namespace

std::filesystem::path resolve_output_dir(const ExperimentConfig& config) {
  if (const char* env = std::getenv("EVODD_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return config.outputs.dir;
}

void write_history_csv(const SolverReport& report, const std::filesystem::path& path, bool wallclock) {
  auto out = open_out(path);
  out << "n,err_Z,err_L2,increment_Z,pairing,wallclock_ms\n";
  for (const auto& row : report.rows) {
    out << row.n << ',' << row.err_z << ',' << row.err_l2 << ',' << row.increment_z << ',' << row.pairing << ','
        << (wallclock ? row.wallclock_ms : 0.0) << '\n';
  }
}

void write_field_dumps(const Problem& problem, const SolverReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const int dim = problem.mesh.dim();
  for (int m = 0; m < problem.grid.levels(); ++m) {
    std::ostringstream name;
    name << "level_" << std::setw(4) << std::setfill('0') << m << ".txt";
    auto out = open_out(dir / name.str());
    const double t = problem.grid.time(m);
    out << (dim == 1 ? "subdomain x value\n" : "subdomain x y value\n");
    for (int i = 1; i <= 2; ++i) {
      const SubMesh& mesh = problem.sub(i);
      const SpaceTimeField& u = i == 1 ? report.u1 : report.u2;
      for (int a = 0; a < mesh.num_nodes(); ++a) {
        const Vec2 y = problem.map.forward(t, mesh.nodes[a]);
        out << i << ' ' << y[0] << ' ';
        if (dim == 2) out << y[1] << ' ';
        out << u.values(m, a) << '\n';
      }
    }
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  return run_experiment(config, resolve_output_dir(config));
}

ExperimentResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& dir) {
  const Problem problem = make_problem(config);
  const SteklovContext ctx(problem);
  ExperimentResult result;
  result.report = run_iteration(ctx, config.method, ctx.zero_primal());
  result.dir = dir;
  std::filesystem::create_directories(result.dir);
  if (config.outputs.emit_history) {
    const auto path = result.dir / "history.csv";
    write_history_csv(result.report, path, config.outputs.wallclock);
    result.files.push_back(path);
  }
  const auto summary = result.dir / "summary.txt";
  write_summary(config, result.report, summary);
  result.files.push_back(summary);
  if (config.outputs.emit_fields) {
    const auto fields = result.dir / "fields";
    write_field_dumps(problem, result.report, fields);
    result.files.push_back(fields);
  }
  return result;
}

EquivalenceResult compare_dd_vs_monolithic(const Problem& problem) {
  const SpaceTimeField u = solve_monolithic(problem);
  const InterfaceTrace eta = trace_of(problem.mesh, restrict_field(problem.mesh, u, 1));

  const SpaceTimeField u1 = solve_subdomain(problem, 1, DirichletData{eta}, problem.source);
  InterfaceTrace flux = conormal_residual(problem, 1, u1, problem.source);
  flux.values = -flux.values;
  const SpaceTimeField u2 = solve_subdomain(problem, 2, NeumannData{flux}, problem.source);

  const SpaceTimeField glued = glue(problem.mesh, u1, u2);
  EquivalenceResult out;
  out.max_abs_diff = (glued.values - u.values).cwiseAbs().maxCoeff();
  out.monolithic_max = u.values.cwiseAbs().maxCoeff();
  out.max_rel_diff = out.monolithic_max > 0.0 ? out.max_abs_diff / out.monolithic_max : out.max_abs_diff;
  return out;
}

EquivalenceResult compare_dd_vs_monolithic(const ExperimentConfig& config) {
  return compare_dd_vs_monolithic(make_problem(config));
}

double manufactured_error(const Problem& problem, const SpaceTimeField& u) {
  const SubMesh& mesh = problem.mesh.whole();
  if (u.tag != MeshTag::whole || u.nodes() != mesh.num_nodes()) {
    throw Error(ErrorKind::input, kModule, "manufactured_error expects a monolithic field");
  }
  const QuadratureRule& rule = simplex_rule(mesh.dim);
  const int nv = mesh.vertices_per_cell();
  double total = 0.0;
  for (int m = 1; m < problem.grid.levels(); ++m) {
    const double t = problem.grid.time(m);
    const double absj = std::abs(problem.map.det(t));
    double level = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const CellGeometry g = cell_geometry(mesh, c);
      for (size_t q = 0; q < rule.points.size(); ++q) {
        const Vec2 x = g.origin + g.jac * rule.points[q];
        const auto phi = p1_values(mesh.dim, rule.points[q]);
        double uh = 0.0;
        for (int a = 0; a < nv; ++a) uh += phi[a] * u.values(m, mesh.cells[c][a]);
        const double exact = manufactured_solution(problem.source, problem.map, t, problem.map.forward(t, x));
        level += rule.weights[q] * g.measure_factor * absj * (uh - exact) * (uh - exact);
      }
    }
    total += problem.grid.dt() * level;
  }
  return std::sqrt(total);
}

MmsTable mms_convergence_study(const ExperimentConfig& config, int levels) {
  if (config.source.kind != SourceKind::manufactured) {
    throw Error(ErrorKind::configuration, kModule, "mms study needs source.kind = manufactured");
  }
  if (levels < 3) throw Error(ErrorKind::configuration, kModule, "mms study needs at least 3 levels");
  MmsTable table;
  auto solve_error = [&](int resolution, int steps) {
    ExperimentConfig c = config;
    c.geometry.resolution = resolution;
    c.time.steps = steps;
    const Problem p = make_problem(c);
    return manufactured_error(p, solve_monolithic(p));
  };
  auto order = [](const MmsRow& coarse, const MmsRow& fine, double coarse_step, double fine_step) {
    return std::log(coarse.error / fine.error) / std::log(coarse_step / fine_step);
  };

  int resolution = config.mms.base_resolution;
  for (int l = 0; l < levels; ++l, resolution *= 2) {
    const double h = 1.0 / resolution;
    const int steps = static_cast<int>(std::ceil(config.time.T / (config.mms.dt_factor * h * h)));
    MmsRow row{h, config.time.T / steps, solve_error(resolution, steps)};
    if (!table.spatial.empty()) row.order = order(table.spatial.back(), row, table.spatial.back().h, h);
    table.spatial.push_back(row);
  }

  int steps = config.mms.base_steps;
  for (int l = 0; l < levels; ++l, steps *= 2) {
    MmsRow row{1.0 / config.mms.fine_resolution, config.time.T / steps, solve_error(config.mms.fine_resolution, steps)};
    if (!table.temporal.empty()) row.order = order(table.temporal.back(), row, table.temporal.back().dt, row.dt);
    table.temporal.push_back(row);
  }
  return table;
}

}  // namespace evodd
