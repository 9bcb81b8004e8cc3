#include "evodd/fields.hpp"

#include "evodd/error.hpp"

#include <cmath>
#include <string>

namespace evodd {

TimeGrid::TimeGrid(double final_time, int num_steps) : T(final_time), steps(num_steps) {
  if (!(final_time > 0.0) || !std::isfinite(final_time)) {
    throw Error(ErrorKind::configuration, "stepping", "final time T must be positive");
  }
  if (num_steps < 1) {
    throw Error(ErrorKind::configuration, "stepping", "number of time steps must be >= 1");
  }
}

const char* to_string(MeshTag tag) noexcept {
  switch (tag) {
    case MeshTag::whole: return "Omega";
    case MeshTag::sub1: return "Omega_1";
    case MeshTag::sub2: return "Omega_2";
  }
  return "?";
}

Eigen::VectorXd flatten(const InterfaceTrace& trace) {
  const int levels = trace.levels() - 1;
  const int nodes = trace.nodes();
  Eigen::VectorXd flat(static_cast<Eigen::Index>(levels) * nodes);
  for (int m = 0; m < levels; ++m) {
    for (int a = 0; a < nodes; ++a) flat[m * nodes + a] = trace.values(m + 1, a);
  }
  return flat;
}

InterfaceTrace unflatten(TraceFlavor flavor, const Eigen::VectorXd& flat, int nodes) {
  if (nodes <= 0 || flat.size() % nodes != 0) {
    throw Error(ErrorKind::input, "mesh", "flattened trace length is not a multiple of the node count");
  }
  const int levels = static_cast<int>(flat.size() / nodes);
  InterfaceTrace trace(flavor, levels + 1, nodes);
  for (int m = 0; m < levels; ++m) {
    for (int a = 0; a < nodes; ++a) trace.values(m + 1, a) = flat[m * nodes + a];
  }
  return trace;
}

double pairing(const InterfaceTrace& dual, const InterfaceTrace& primal, const TimeGrid& grid) {
  if (dual.flavor != TraceFlavor::dual || primal.flavor != TraceFlavor::primal) {
    throw Error(ErrorKind::misuse, "interface", "pairing expects (dual, primal) traces");
  }
  if (dual.values.rows() != primal.values.rows() || dual.values.cols() != primal.values.cols()) {
    throw Error(ErrorKind::input, "interface", "trace shape mismatch in pairing");
  }
  double sum = 0.0;
  for (int m = 1; m < dual.levels(); ++m) sum += grid.dt() * dual.values.row(m).dot(primal.values.row(m));
  return sum;
}

}  // namespace evodd
