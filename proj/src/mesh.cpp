#include "evodd/mesh.hpp"

#include "evodd/error.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace evodd {

namespace {

constexpr const char* kModule = "mesh";

int global_index(int dim, int resolution, int col, int row) {
  return dim == 1 ? col : row * (resolution + 1) + col;
}

}  // namespace

std::vector<int> SubMesh::nodes_with_role(NodeRole role) const {
  std::vector<int> out;
  for (int a = 0; a < num_nodes(); ++a) {
    if (roles[a] == role) out.push_back(a);
  }
  return out;
}

DecomposedMesh::DecomposedMesh(int dim, int resolution, double gamma)
    : dim_(dim), resolution_(resolution), gamma_(gamma) {
  if (dim != 1 && dim != 2) {
    throw Error(ErrorKind::configuration, kModule, "dim must be 1 or 2");
  }
  if (resolution < 4) {
    throw Error(ErrorKind::configuration, kModule, "resolution must be >= 4");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorKind::configuration, kModule, "split coordinate gamma must lie in (0,1)");
  }
  const double scaled = gamma * resolution;
  const double nearest = std::round(scaled);
  if (std::abs(scaled - nearest) > 1e-9 * resolution) {
    std::ostringstream msg;
    msg << "gamma = " << gamma << " is not on a grid line (gamma * resolution = " << scaled << ")";
    throw Error(ErrorKind::configuration, kModule, msg.str());
  }
  split_ = static_cast<int>(nearest);
  if (split_ <= 0 || split_ >= resolution) {
    throw Error(ErrorKind::configuration, kModule, "split must leave cells on both sides");
  }
  whole_ = build(MeshTag::whole, 0, resolution);
  sub1_ = build(MeshTag::sub1, 0, split_);
  sub2_ = build(MeshTag::sub2, split_, resolution);
}

SubMesh DecomposedMesh::build(MeshTag tag, int first_col, int last_col) const {
  SubMesh m;
  m.tag = tag;
  m.dim = dim_;
  const int ncols = last_col - first_col + 1;
  const int nrows = dim_ == 1 ? 1 : resolution_ + 1;
  const double h = 1.0 / resolution_;
  auto local = [&](int col, int row) { return row * ncols + (col - first_col); };

  m.nodes.resize(static_cast<size_t>(ncols) * nrows);
  m.to_global.resize(m.nodes.size());
  m.roles.resize(m.nodes.size());
  for (int row = 0; row < nrows; ++row) {
    for (int col = first_col; col <= last_col; ++col) {
      const int a = local(col, row);
      m.nodes[a] = Vec2(col * h, dim_ == 1 ? 0.0 : row * h);
      m.to_global[a] = global_index(dim_, resolution_, col, row);
      const bool outer = col == 0 || col == resolution_ || (dim_ == 2 && (row == 0 || row == resolution_));
      const bool on_gamma = col == split_;
      if (outer) {
        m.roles[a] = NodeRole::boundary;
      } else if (on_gamma) {
        m.roles[a] = NodeRole::interface;
      } else {
        m.roles[a] = NodeRole::interior;
      }
      if (on_gamma) {
        m.interface_all.push_back(a);
        if (!outer) m.interface_nodes.push_back(a);
      }
    }
  }

  if (dim_ == 1) {
    for (int col = first_col; col < last_col; ++col) {
      m.cells.push_back({local(col, 0), local(col + 1, 0), -1});
    }
  } else {
    for (int row = 0; row < resolution_; ++row) {
      for (int col = first_col; col < last_col; ++col) {
        const int n00 = local(col, row);
        const int n10 = local(col + 1, row);
        const int n01 = local(col, row + 1);
        const int n11 = local(col + 1, row + 1);
        m.cells.push_back({n00, n10, n11});
        m.cells.push_back({n00, n11, n01});
      }
    }
  }
  return m;
}

const SubMesh& DecomposedMesh::sub(int i) const {
  if (i == 1) return sub1_;
  if (i == 2) return sub2_;
  throw Error(ErrorKind::input, kModule, "subdomain index must be 1 or 2");
}

const SubMesh& DecomposedMesh::part(MeshTag tag) const {
  switch (tag) {
    case MeshTag::whole: return whole_;
    case MeshTag::sub1: return sub1_;
    case MeshTag::sub2: return sub2_;
  }
  return whole_;
}

DecomposedMesh build_decomposed_mesh(int dim, int resolution, double gamma) {
  return DecomposedMesh(dim, resolution, gamma);
}

SpaceTimeField restrict_field(const DecomposedMesh& mesh, const SpaceTimeField& u, int i) {
  if (u.tag != MeshTag::whole || u.nodes() != mesh.whole().num_nodes()) {
    throw Error(ErrorKind::misuse, kModule, "restrict expects a field on the monolithic mesh");
  }
  const SubMesh& sub = mesh.sub(i);
  SpaceTimeField out(sub.tag, u.levels(), sub.num_nodes());
  for (int a = 0; a < sub.num_nodes(); ++a) out.values.col(a) = u.values.col(sub.to_global[a]);
  return out;
}

SpaceTimeField glue(const DecomposedMesh& mesh, const SpaceTimeField& u1, const SpaceTimeField& u2, double tol) {
  const SubMesh& s1 = mesh.sub(1);
  const SubMesh& s2 = mesh.sub(2);
  if (u1.tag != MeshTag::sub1 || u2.tag != MeshTag::sub2 || u1.nodes() != s1.num_nodes() ||
      u2.nodes() != s2.num_nodes()) {
    throw Error(ErrorKind::misuse, kModule, "glue expects fields on Omega_1 and Omega_2");
  }
  if (u1.levels() != u2.levels()) {
    throw Error(ErrorKind::input, kModule, "glue: time grids differ");
  }
  double worst = 0.0;
  int worst_level = -1;
  int worst_node = -1;
  for (size_t k = 0; k < s1.interface_all.size(); ++k) {
    const int a1 = s1.interface_all[k];
    const int a2 = s2.interface_all[k];
    for (int m = 0; m < u1.levels(); ++m) {
      const double d = std::abs(u1.values(m, a1) - u2.values(m, a2));
      if (d > worst) {
        worst = d;
        worst_level = m;
        worst_node = s1.to_global[a1];
      }
    }
  }
  if (worst > tol) {
    std::ostringstream msg;
    msg << "interface traces differ by " << worst << " > " << tol << " at time level " << worst_level
        << ", node " << worst_node;
    throw Error(ErrorKind::transmission_violation, kModule, msg.str());
  }
  SpaceTimeField out(MeshTag::whole, u1.levels(), mesh.whole().num_nodes());
  for (int a = 0; a < s2.num_nodes(); ++a) out.values.col(s2.to_global[a]) = u2.values.col(a);
  for (int a = 0; a < s1.num_nodes(); ++a) out.values.col(s1.to_global[a]) = u1.values.col(a);
  return out;
}

InterfaceTrace trace_of(const DecomposedMesh& mesh, const SpaceTimeField& u) {
  const SubMesh& part = mesh.part(u.tag);
  if (u.nodes() != part.num_nodes()) {
    throw Error(ErrorKind::misuse, kModule, "field does not match its mesh tag");
  }
  InterfaceTrace out(TraceFlavor::primal, u.levels(), part.num_interface());
  for (int k = 0; k < part.num_interface(); ++k) out.values.col(k) = u.values.col(part.interface_nodes[k]);
  return out;
}

}  // namespace evodd
