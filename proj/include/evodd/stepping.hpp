#pragma once

#include "evodd/assembly.hpp"
#include "evodd/coefficients.hpp"
#include "evodd/evolution.hpp"
#include "evodd/fields.hpp"
#include "evodd/mesh.hpp"

#include <variant>

namespace evodd {

/// conservative:    [M(t+) + dt (K+R)(t+)] U+ = M(t) U + dt F(t+)
/// nonconservative: [M(t+) + dt (W+K+R)(t+)] U+ = M(t+) U + dt F(t+), W the div-w weighted mass
enum class Scheme { conservative, nonconservative };

/// Everything a space-time solve needs. Validates the well-posedness margin on construction.
struct Problem {
  DecomposedMesh mesh;
  EvolutionMap map;
  ProblemCoefficients coeffs;
  SourceSpec source;
  TimeGrid grid;
  Scheme scheme = Scheme::conservative;
  Exec exec = Exec::parallel;
  double margin = 0.0;

  Problem(DecomposedMesh mesh, EvolutionMap map, ProblemCoefficients coeffs, SourceSpec source, TimeGrid grid,
          Scheme scheme = Scheme::conservative);

  const SubMesh& sub(int i) const { return mesh.sub(i); }
  int num_interface() const { return mesh.num_interface(); }
};

struct DirichletData {
  InterfaceTrace eta;  ///< primal
};
struct NeumannData {
  InterfaceTrace mu;  ///< dual
};
struct RobinData {
  double s0;
  InterfaceTrace r;  ///< dual
};
using InterfaceCondition = std::variant<DirichletData, NeumannData, RobinData>;

/// Homogeneous Dirichlet data on Gamma.
InterfaceCondition zero_dirichlet(const Problem& problem);

/// Implicit step operator at level m+1 on one mesh: lhs U^{m+1} = rhs (before boundary conditions).
struct StepOperator {
  SparseMatrix lhs;
  Eigen::VectorXd rhs;
};
StepOperator step_operator(const Problem& problem, const SubMesh& mesh, const SourceSpec& source, int m,
                           const Eigen::VectorXd& previous);

SpaceTimeField solve_monolithic(const Problem& problem);

SpaceTimeField solve_subdomain(const Problem& problem, int i, const InterfaceCondition& bc, const SourceSpec& source);

/// Interface rows of (lhs U^{m+1} - rhs) / dt: the discrete conormal flux w.r.t. nu_i.
/// Throws misuse if the interior rows are not satisfied (u is not a subdomain solution).
InterfaceTrace conormal_residual(const Problem& problem, int i, const SpaceTimeField& u, const SourceSpec& source);

}  // namespace evodd
