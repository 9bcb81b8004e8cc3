#include "evodd/stepping.hpp"

#include "evodd/error.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <sstream>

namespace evodd {

namespace {

constexpr const char* kModule = "stepping";
constexpr double kInteriorResidualTol = 1e-8;

void check_trace(const InterfaceTrace& trace, TraceFlavor flavor, const Problem& problem, const char* what) {
  if (trace.flavor != flavor) {
    throw Error(ErrorKind::input, kModule, std::string(what) + ": wrong trace flavor");
  }
  if (trace.levels() != problem.grid.levels() || trace.nodes() != problem.num_interface()) {
    std::ostringstream msg;
    msg << what << ": trace shape " << trace.levels() << "x" << trace.nodes() << " does not match "
        << problem.grid.levels() << "x" << problem.num_interface();
    throw Error(ErrorKind::input, kModule, msg.str());
  }
}

/// Boundary handling for one march: which nodes are free and how Gamma enters.
struct MarchSetup {
  std::vector<int> position;  ///< local node -> free index, -1 when pinned
  int num_free = 0;
};

MarchSetup make_setup(const SubMesh& mesh, bool gamma_free) {
  MarchSetup s;
  s.position.assign(mesh.num_nodes(), -1);
  for (int a = 0; a < mesh.num_nodes(); ++a) {
    const NodeRole role = mesh.roles[a];
    if (role == NodeRole::interior || (role == NodeRole::interface && gamma_free)) s.position[a] = s.num_free++;
  }
  return s;
}

/// Time march on one mesh. `pinned(m)` returns the nodal values imposed at level m
/// (zero except Gamma under Dirichlet data); `augment(m, triplets, rhs)` adds the
/// Robin/Neumann contributions on the free interface rows.
template <class Pinned, class Augment>
SpaceTimeField march(const Problem& problem, const SubMesh& mesh, const SourceSpec& source, const MarchSetup& setup,
                     Pinned&& pinned, Augment&& augment) {
  const TimeGrid& grid = problem.grid;
  SpaceTimeField u(mesh.tag, grid.levels(), mesh.num_nodes());
  Eigen::VectorXd current = Eigen::VectorXd::Zero(mesh.num_nodes());
  for (int m = 0; m < grid.steps; ++m) {
    StepOperator op = step_operator(problem, mesh, source, m, current);
    const Eigen::VectorXd fixed = pinned(m + 1);
    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::VectorXd rhs(setup.num_free);
    for (int a = 0; a < mesh.num_nodes(); ++a) {
      if (setup.position[a] >= 0) rhs[setup.position[a]] = op.rhs[a];
    }
    for (int col = 0; col < op.lhs.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(op.lhs, col); it; ++it) {
        const int pr = setup.position[it.row()];
        if (pr < 0) continue;
        const int pc = setup.position[it.col()];
        if (pc >= 0) {
          triplets.emplace_back(pr, pc, it.value());
        } else {
          rhs[pr] -= it.value() * fixed[it.col()];
        }
      }
    }
    augment(m + 1, triplets, rhs);
    SparseMatrix system(setup.num_free, setup.num_free);
    system.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::SimplicialLLT<SparseMatrix> llt(system);
    if (llt.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "step system on " << to_string(mesh.tag) << " is not SPD at step " << m + 1;
      throw Error(ErrorKind::numerical_failure, kModule, msg.str());
    }
    const Eigen::VectorXd sol = llt.solve(rhs);
    if (llt.info() != Eigen::Success || !sol.allFinite()) {
      std::ostringstream msg;
      msg << "linear solve failed on " << to_string(mesh.tag) << " at step " << m + 1;
      throw Error(ErrorKind::numerical_failure, kModule, msg.str());
    }
    current = fixed;
    for (int a = 0; a < mesh.num_nodes(); ++a) {
      if (setup.position[a] >= 0) current[a] = sol[setup.position[a]];
    }
    u.values.row(m + 1) = current.transpose();
  }
  return u;
}

}  // namespace

Problem::Problem(DecomposedMesh mesh_, EvolutionMap map_, ProblemCoefficients coeffs_, SourceSpec source_,
                 TimeGrid grid_, Scheme scheme_)
    : mesh(std::move(mesh_)),
      map(map_),
      coeffs(coeffs_),
      source(source_),
      grid(grid_),
      scheme(scheme_) {
  if (map.dim() != mesh.dim()) {
    throw Error(ErrorKind::configuration, kModule, "evolution and mesh dimensions differ");
  }
  margin = well_posedness_margin(coeffs, map, grid);
}

InterfaceCondition zero_dirichlet(const Problem& problem) {
  return DirichletData{InterfaceTrace::zeros(TraceFlavor::primal, problem.grid, problem.num_interface())};
}

StepOperator step_operator(const Problem& problem, const SubMesh& mesh, const SourceSpec& source, int m,
                           const Eigen::VectorXd& previous) {
  const double dt = problem.grid.dt();
  const double t_now = problem.grid.time(m);
  const double t_next = problem.grid.time(m + 1);
  const Exec exec = problem.exec;
  const SparseMatrix mass_next =
      assemble_weighted_mass(mesh, problem.map, problem.coeffs, t_next, MassWeight::plain_J, exec);
  SparseMatrix op = assemble_stiffness(mesh, problem.coeffs, problem.map, t_next, exec) +
                    assemble_weighted_mass(mesh, problem.map, problem.coeffs, t_next, MassWeight::beta_J, exec);
  StepOperator out;
  if (problem.scheme == Scheme::conservative) {
    const SparseMatrix mass_now =
        assemble_weighted_mass(mesh, problem.map, problem.coeffs, t_now, MassWeight::plain_J, exec);
    out.rhs = mass_now * previous;
  } else {
    op += assemble_weighted_mass(mesh, problem.map, problem.coeffs, t_next, MassWeight::div_w_J, exec);
    out.rhs = mass_next * previous;
  }
  out.lhs = mass_next + dt * op;
  out.rhs += dt * assemble_load(mesh, source, problem.coeffs, problem.map, t_next, exec);
  return out;
}

SpaceTimeField solve_monolithic(const Problem& problem) {
  const SubMesh& mesh = problem.mesh.whole();
  const MarchSetup setup = make_setup(mesh, true);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(mesh.num_nodes());
  return march(
      problem, mesh, problem.source, setup, [&](int) { return zero; },
      [](int, std::vector<Eigen::Triplet<double>>&, Eigen::VectorXd&) {});
}

SpaceTimeField solve_subdomain(const Problem& problem, int i, const InterfaceCondition& bc, const SourceSpec& source) {
  const SubMesh& mesh = problem.sub(i);
  const double dt = problem.grid.dt();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(mesh.num_nodes());
  auto no_augment = [](int, std::vector<Eigen::Triplet<double>>&, Eigen::VectorXd&) {};

  if (const auto* d = std::get_if<DirichletData>(&bc)) {
    check_trace(d->eta, TraceFlavor::primal, problem, "dirichlet data");
    const MarchSetup setup = make_setup(mesh, false);
    auto pinned = [&](int m) {
      Eigen::VectorXd fixed = zero;
      for (int k = 0; k < mesh.num_interface(); ++k) fixed[mesh.interface_nodes[k]] = d->eta.values(m, k);
      return fixed;
    };
    return march(problem, mesh, source, setup, pinned, no_augment);
  }

  const MarchSetup setup = make_setup(mesh, true);
  auto pinned = [&](int) { return zero; };
  if (const auto* n = std::get_if<NeumannData>(&bc)) {
    check_trace(n->mu, TraceFlavor::dual, problem, "neumann data");
    auto augment = [&](int m, std::vector<Eigen::Triplet<double>>&, Eigen::VectorXd& rhs) {
      for (int k = 0; k < mesh.num_interface(); ++k) rhs[setup.position[mesh.interface_nodes[k]]] += dt * n->mu.values(m, k);
    };
    return march(problem, mesh, source, setup, pinned, augment);
  }

  const auto& r = std::get<RobinData>(bc);
  check_trace(r.r, TraceFlavor::dual, problem, "robin data");
  if (!(r.s0 > 0.0)) throw Error(ErrorKind::input, kModule, "robin parameter s0 must be positive");
  auto augment = [&](int m, std::vector<Eigen::Triplet<double>>& triplets, Eigen::VectorXd& rhs) {
    const Eigen::MatrixXd b = interface_mass_free(mesh, problem.map, problem.grid.time(m));
    for (int k = 0; k < mesh.num_interface(); ++k) {
      const int pk = setup.position[mesh.interface_nodes[k]];
      rhs[pk] += dt * r.r.values(m, k);
      for (int l = 0; l < mesh.num_interface(); ++l) {
        if (b(k, l) != 0.0) triplets.emplace_back(pk, setup.position[mesh.interface_nodes[l]], dt * r.s0 * b(k, l));
      }
    }
  };
  return march(problem, mesh, source, setup, pinned, augment);
}

InterfaceTrace conormal_residual(const Problem& problem, int i, const SpaceTimeField& u, const SourceSpec& source) {
  const SubMesh& mesh = problem.sub(i);
  if (u.tag != mesh.tag || u.nodes() != mesh.num_nodes() || u.levels() != problem.grid.levels()) {
    throw Error(ErrorKind::misuse, kModule, "conormal_residual: field does not live on the requested subdomain");
  }
  const double dt = problem.grid.dt();
  InterfaceTrace lambda(TraceFlavor::dual, problem.grid.levels(), mesh.num_interface());
  for (int m = 0; m < problem.grid.steps; ++m) {
    const StepOperator op = step_operator(problem, mesh, source, m, u.values.row(m).transpose());
    const Eigen::VectorXd next = u.values.row(m + 1).transpose();
    const Eigen::VectorXd residual = (op.lhs * next - op.rhs) / dt;
    const double scale = std::max(1.0, next.lpNorm<Eigen::Infinity>());
    for (int a = 0; a < mesh.num_nodes(); ++a) {
      if (mesh.roles[a] == NodeRole::interior && std::abs(residual[a]) > kInteriorResidualTol * scale) {
        std::ostringstream msg;
        msg << "interior residual " << std::abs(residual[a]) << " at step " << m + 1 << ", node " << a
            << " exceeds 1e-8: field is not a subdomain solution";
        throw Error(ErrorKind::misuse, kModule, msg.str());
      }
    }
    for (int k = 0; k < mesh.num_interface(); ++k) lambda.values(m + 1, k) = residual[mesh.interface_nodes[k]];
  }
  return lambda;
}

}  // namespace evodd
