#pragma once

#include "evodd/coefficients.hpp"
#include "evodd/evolution.hpp"
#include "evodd/mesh.hpp"
#include "evodd/parallel.hpp"

#include <Eigen/Sparse>

#include <array>
#include <vector>

namespace evodd {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Weight W(t,x) multiplying phi_a phi_b in the pulled-back mass forms.
enum class MassWeight {
  plain_J,   ///< |J_t|
  div_w_J,   ///< (div w o Phi_t) |J_t|
  beta_J,    ///< (beta o Phi_t) |J_t|
  unweighted,
};

/// Quadrature on the reference simplex: points in barycentric-free local
/// coordinates and weights summing to the simplex measure (1 or 1/2).
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
};
const QuadratureRule& simplex_rule(int dim);

/// Affine geometry of one P1 cell: x = origin + jac * xi.
struct CellGeometry {
  Vec2 origin;
  Mat2 jac;
  double measure_factor;  ///< |det jac|
  /// Reference-coordinate gradients of the P1 basis (columns), rows 0..dim-1 used.
  Eigen::Matrix<double, 2, 3> grads;
};
CellGeometry cell_geometry(const SubMesh& mesh, int cell);

/// P1 basis values at a local point.
std::array<double, 3> p1_values(int dim, const Vec2& xi);

SparseMatrix assemble_weighted_mass(const SubMesh& mesh, const EvolutionMap& map, const ProblemCoefficients& coeffs,
                                    double t, MassWeight weight, Exec exec = Exec::parallel);

/// Stiffness of the pulled-back diffusion: effective tensor |J_t| DPhi_t^{-1} alpha DPhi_t^{-T}.
SparseMatrix assemble_stiffness(const SubMesh& mesh, const ProblemCoefficients& coeffs, const EvolutionMap& map,
                                double t, Exec exec = Exec::parallel);

/// Mass on all interface nodes (including clamped endpoints in 2D), weighted by the
/// interface length scaling. In 1D this is the 1x1 counting-measure matrix [1].
SparseMatrix assemble_interface_mass(const SubMesh& mesh, const EvolutionMap& map, double t);

/// Interface mass restricted to the free interface nodes.
Eigen::MatrixXd interface_mass_free(const SubMesh& mesh, const EvolutionMap& map, double t);

/// Load vector: entries int f(t, Phi_t(x)) phi_a(x) |J_t(x)| dx.
Eigen::VectorXd assemble_load(const SubMesh& mesh, const SourceSpec& source, const ProblemCoefficients& coeffs,
                              const EvolutionMap& map, double t, Exec exec = Exec::parallel);

}  // namespace evodd
