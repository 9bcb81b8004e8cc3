#include "evodd/assembly.hpp"

#include "evodd/error.hpp"

#include <cmath>

namespace evodd {

namespace {

using LocalMatrix = std::array<double, 9>;
using LocalVector = std::array<double, 3>;

QuadratureRule make_gauss3() {
  const double r = std::sqrt(0.6);
  QuadratureRule q;
  for (double xi : {-r, 0.0, r}) q.points.emplace_back(0.5 * (1.0 + xi), 0.0);
  q.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  return q;
}

QuadratureRule make_triangle3() {
  QuadratureRule q;
  q.points = {Vec2(1.0 / 6.0, 1.0 / 6.0), Vec2(2.0 / 3.0, 1.0 / 6.0), Vec2(1.0 / 6.0, 2.0 / 3.0)};
  q.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
  return q;
}

double mass_weight_value(MassWeight weight, const EvolutionMap& map, const ProblemCoefficients& coeffs, double t) {
  switch (weight) {
    case MassWeight::plain_J: return std::abs(map.det(t));
    case MassWeight::div_w_J: return map.divergence(t) * std::abs(map.det(t));
    case MassWeight::beta_J: return coeffs.beta * std::abs(map.det(t));
    case MassWeight::unweighted: return 1.0;
  }
  return 0.0;
}

/// Runs `kernel(cell)` for every cell, storing results in cell order. The parallel
/// policy only changes who computes each slot, so scatter order is identical.
template <class Local, class Kernel>
std::vector<Local> compute_locals(int num_cells, Exec exec, Kernel&& kernel) {
  std::vector<Local> locals(static_cast<size_t>(num_cells));
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int c = 0; c < num_cells; ++c) locals[c] = kernel(c);
  } else {
    for (int c = 0; c < num_cells; ++c) locals[c] = kernel(c);
  }
  return locals;
}

SparseMatrix scatter_matrix(const SubMesh& mesh, const std::vector<LocalMatrix>& locals) {
  const int nv = mesh.vertices_per_cell();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(locals.size() * nv * nv);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    for (int a = 0; a < nv; ++a) {
      for (int b = 0; b < nv; ++b) triplets.emplace_back(cell[a], cell[b], locals[c][a * 3 + b]);
    }
  }
  SparseMatrix mat(mesh.num_nodes(), mesh.num_nodes());
  mat.setFromTriplets(triplets.begin(), triplets.end());
  return mat;
}

}  // namespace

const QuadratureRule& simplex_rule(int dim) {
  static const QuadratureRule gauss3 = make_gauss3();
  static const QuadratureRule tri3 = make_triangle3();
  return dim == 1 ? gauss3 : tri3;
}

CellGeometry cell_geometry(const SubMesh& mesh, int cell) {
  const auto& ids = mesh.cells[cell];
  CellGeometry g;
  g.origin = mesh.nodes[ids[0]];
  g.grads.setZero();
  if (mesh.dim == 1) {
    const double len = mesh.nodes[ids[1]][0] - mesh.nodes[ids[0]][0];
    g.jac << len, 0.0, 0.0, 1.0;
    g.measure_factor = std::abs(len);
    g.grads(0, 0) = -1.0 / len;
    g.grads(0, 1) = 1.0 / len;
  } else {
    g.jac.col(0) = mesh.nodes[ids[1]] - g.origin;
    g.jac.col(1) = mesh.nodes[ids[2]] - g.origin;
    const double det = g.jac.determinant();
    g.measure_factor = std::abs(det);
    Eigen::Matrix<double, 2, 3> ref;
    ref << -1.0, 1.0, 0.0, -1.0, 0.0, 1.0;
    g.grads = g.jac.inverse().transpose() * ref;
  }
  return g;
}

std::array<double, 3> p1_values(int dim, const Vec2& xi) {
  if (dim == 1) return {1.0 - xi[0], xi[0], 0.0};
  return {1.0 - xi[0] - xi[1], xi[0], xi[1]};
}

SparseMatrix assemble_weighted_mass(const SubMesh& mesh, const EvolutionMap& map, const ProblemCoefficients& coeffs,
                                    double t, MassWeight weight, Exec exec) {
  const QuadratureRule& rule = simplex_rule(mesh.dim);
  const int nv = mesh.vertices_per_cell();
  auto kernel = [&](int c) {
    const CellGeometry g = cell_geometry(mesh, c);
    LocalMatrix local{};
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const auto phi = p1_values(mesh.dim, rule.points[q]);
      const double w = rule.weights[q] * g.measure_factor * mass_weight_value(weight, map, coeffs, t);
      for (int a = 0; a < nv; ++a) {
        for (int b = 0; b < nv; ++b) local[a * 3 + b] += w * phi[a] * phi[b];
      }
    }
    return local;
  };
  return scatter_matrix(mesh, compute_locals<LocalMatrix>(mesh.num_cells(), exec, kernel));
}

SparseMatrix assemble_stiffness(const SubMesh& mesh, const ProblemCoefficients& coeffs, const EvolutionMap& map,
                                double t, Exec exec) {
  const QuadratureRule& rule = simplex_rule(mesh.dim);
  const int nv = mesh.vertices_per_cell();
  // The catalog tensor is constant in space; quadrature keeps the kernel general.
  const Mat2 inv = map.jacobian(t).inverse();
  const double absj = std::abs(map.det(t));
  const double alpha = coeffs.alpha(t);
  const Mat2 tensor = absj * alpha * inv * inv.transpose();
  auto kernel = [&](int c) {
    const CellGeometry g = cell_geometry(mesh, c);
    LocalMatrix local{};
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    const double vol = wsum * g.measure_factor;
    for (int a = 0; a < nv; ++a) {
      const Vec2 ga = g.grads.col(a);
      for (int b = 0; b < nv; ++b) {
        const Vec2 gb = g.grads.col(b);
        if (mesh.dim == 1) {
          local[a * 3 + b] = vol * tensor(0, 0) * ga[0] * gb[0];
        } else {
          local[a * 3 + b] = vol * (tensor * ga).dot(gb);
        }
      }
    }
    return local;
  };
  return scatter_matrix(mesh, compute_locals<LocalMatrix>(mesh.num_cells(), exec, kernel));
}

SparseMatrix assemble_interface_mass(const SubMesh& mesh, const EvolutionMap& map, double t) {
  const int n = static_cast<int>(mesh.interface_all.size());
  SparseMatrix mat(n, n);
  if (mesh.dim == 1) {
    mat.insert(0, 0) = 1.0;
    return mat;
  }
  const double omega = surface_weight(map, t, mesh.nodes[mesh.interface_all.front()], Vec2(0.0, 1.0));
  std::vector<Eigen::Triplet<double>> triplets;
  for (int k = 0; k + 1 < n; ++k) {
    const double len = (mesh.nodes[mesh.interface_all[k + 1]] - mesh.nodes[mesh.interface_all[k]]).norm();
    const double diag = omega * len / 3.0;
    const double off = omega * len / 6.0;
    triplets.emplace_back(k, k, diag);
    triplets.emplace_back(k + 1, k + 1, diag);
    triplets.emplace_back(k, k + 1, off);
    triplets.emplace_back(k + 1, k, off);
  }
  mat.setFromTriplets(triplets.begin(), triplets.end());
  return mat;
}

Eigen::MatrixXd interface_mass_free(const SubMesh& mesh, const EvolutionMap& map, double t) {
  const Eigen::MatrixXd full = Eigen::MatrixXd(assemble_interface_mass(mesh, map, t));
  if (mesh.dim == 1) return full;
  // Drop the clamped endpoints (first and last entries of interface_all).
  const int n = mesh.num_interface();
  return full.block(1, 1, n, n);
}

Eigen::VectorXd assemble_load(const SubMesh& mesh, const SourceSpec& source, const ProblemCoefficients& coeffs,
                              const EvolutionMap& map, double t, Exec exec) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.num_nodes());
  if (source.kind == SourceKind::zero) return load;
  const QuadratureRule& rule = simplex_rule(mesh.dim);
  const int nv = mesh.vertices_per_cell();
  const double absj = std::abs(map.det(t));
  auto kernel = [&](int c) {
    const CellGeometry g = cell_geometry(mesh, c);
    LocalVector local{};
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 x = g.origin + g.jac * rule.points[q];
      const double f = evaluate_source(source, coeffs, map, t, map.forward(t, x));
      const auto phi = p1_values(mesh.dim, rule.points[q]);
      const double w = rule.weights[q] * g.measure_factor * absj * f;
      for (int a = 0; a < nv; ++a) local[a] += w * phi[a];
    }
    return local;
  };
  const auto locals = compute_locals<LocalVector>(mesh.num_cells(), exec, kernel);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int a = 0; a < nv; ++a) load[mesh.cells[c][a]] += locals[c][a];
  }
  return load;
}

}  // namespace evodd
