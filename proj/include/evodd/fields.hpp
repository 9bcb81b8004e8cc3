#pragma once

#include <Eigen/Dense>

namespace evodd {

/// Uniform time grid t_m = m T / M on the truncated horizon [0, T].
struct TimeGrid {
  double T = 1.0;
  int steps = 64;

  TimeGrid() = default;
  TimeGrid(double final_time, int num_steps);

  double dt() const noexcept { return T / steps; }
  double time(int m) const noexcept { return T * static_cast<double>(m) / steps; }
  int levels() const noexcept { return steps + 1; }
};

enum class MeshTag { whole, sub1, sub2 };

const char* to_string(MeshTag tag) noexcept;

/// Nodal values over all time levels: row m holds the values at t_m.
struct SpaceTimeField {
  MeshTag tag = MeshTag::whole;
  Eigen::MatrixXd values;

  SpaceTimeField() = default;
  SpaceTimeField(MeshTag mesh_tag, int levels, int nodes)
      : tag(mesh_tag), values(Eigen::MatrixXd::Zero(levels, nodes)) {}

  int levels() const noexcept { return static_cast<int>(values.rows()); }
  int nodes() const noexcept { return static_cast<int>(values.cols()); }
};

enum class TraceFlavor { primal, dual };

/// Values on the free interface nodes over all time levels.
///
/// Primal traces hold nodal values. Dual traces hold nodal functionals per
/// unit time: the pairing with a primal trace is sum_{m>=1} dt * mu_m . eta_m.
struct InterfaceTrace {
  TraceFlavor flavor = TraceFlavor::primal;
  Eigen::MatrixXd values;

  InterfaceTrace() = default;
  InterfaceTrace(TraceFlavor f, int levels, int nodes)
      : flavor(f), values(Eigen::MatrixXd::Zero(levels, nodes)) {}
  InterfaceTrace(TraceFlavor f, Eigen::MatrixXd v) : flavor(f), values(std::move(v)) {}

  int levels() const noexcept { return static_cast<int>(values.rows()); }
  int nodes() const noexcept { return static_cast<int>(values.cols()); }

  static InterfaceTrace zeros(TraceFlavor f, const TimeGrid& grid, int nodes) {
    return InterfaceTrace(f, grid.levels(), nodes);
  }
};

/// Flatten levels 1..M (level 0 is pinned to zero) into a vector of length M * nodes,
/// time-major.
Eigen::VectorXd flatten(const InterfaceTrace& trace);
InterfaceTrace unflatten(TraceFlavor flavor, const Eigen::VectorXd& flat, int nodes);

/// Pairing of a dual and a primal trace: sum_{m>=1} dt * mu_m . eta_m.
double pairing(const InterfaceTrace& dual, const InterfaceTrace& primal, const TimeGrid& grid);

}  // namespace evodd
