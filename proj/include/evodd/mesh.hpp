#pragma once

#include "evodd/evolution.hpp"
#include "evodd/fields.hpp"

#include <array>
#include <vector>

namespace evodd {

enum class NodeRole {
  interior,   ///< free node away from the interface
  interface,  ///< free node on Gamma(0)
  boundary,   ///< homogeneous Dirichlet node on the outer boundary (incl. Gamma endpoints in 2D)
};

/// One of the three reference meshes: Omega(0), Omega_1(0) or Omega_2(0).
struct SubMesh {
  MeshTag tag = MeshTag::whole;
  int dim = 1;
  std::vector<Vec2> nodes;
  /// P1 cells; in 1D only the first two entries are used.
  std::vector<std::array<int, 3>> cells;
  /// Injection q_i: local node index -> monolithic node index.
  std::vector<int> to_global;
  std::vector<NodeRole> roles;
  /// Free interface nodes ordered along Gamma.
  std::vector<int> interface_nodes;
  /// All nodes on Gamma including the clamped endpoints (2D); equals interface_nodes in 1D.
  std::vector<int> interface_all;

  int num_nodes() const noexcept { return static_cast<int>(nodes.size()); }
  int num_cells() const noexcept { return static_cast<int>(cells.size()); }
  int vertices_per_cell() const noexcept { return dim + 1; }
  int num_interface() const noexcept { return static_cast<int>(interface_nodes.size()); }
  std::vector<int> nodes_with_role(NodeRole role) const;
};

/// Structured reference meshes of the unit interval/square split at x = gamma.
/// Omega_1 = {x < gamma}, Omega_2 = {x > gamma}; nu_1 = +e_x on Gamma.
class DecomposedMesh {
 public:
  DecomposedMesh(int dim, int resolution, double gamma);

  int dim() const noexcept { return dim_; }
  int resolution() const noexcept { return resolution_; }
  double gamma() const noexcept { return gamma_; }
  double h() const noexcept { return 1.0 / resolution_; }
  int split_index() const noexcept { return split_; }

  const SubMesh& whole() const noexcept { return whole_; }
  const SubMesh& sub(int i) const;
  const SubMesh& part(MeshTag tag) const;

  int num_interface() const noexcept { return whole_.num_interface(); }

 private:
  SubMesh build(MeshTag tag, int first_col, int last_col) const;

  int dim_;
  int resolution_;
  double gamma_;
  int split_;
  SubMesh whole_;
  SubMesh sub1_;
  SubMesh sub2_;
};

DecomposedMesh build_decomposed_mesh(int dim, int resolution, double gamma);

SpaceTimeField restrict_field(const DecomposedMesh& mesh, const SpaceTimeField& u, int i);

/// Injects subdomain fields into the monolithic mesh. Interface values are taken
/// from u1; throws transmission_violation if the traces differ by more than tol.
SpaceTimeField glue(const DecomposedMesh& mesh, const SpaceTimeField& u1, const SpaceTimeField& u2,
                    double tol = 1e-9);

/// Primal trace on the free interface nodes (works on any of the three meshes).
InterfaceTrace trace_of(const DecomposedMesh& mesh, const SpaceTimeField& u);

}  // namespace evodd
