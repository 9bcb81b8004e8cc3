#include "evodd/norms.hpp"

#include "evodd/assembly.hpp"
#include "evodd/error.hpp"

#include <cmath>

namespace evodd {

namespace {

constexpr const char* kModule = "norms";

void check_primal(const InterfaceTrace& trace, const NormWeights& w) {
  if (trace.flavor != TraceFlavor::primal) throw Error(ErrorKind::input, kModule, "norms take primal traces");
  if (trace.levels() != w.grid.levels() || trace.nodes() != w.num_interface()) {
    throw Error(ErrorKind::input, kModule, "trace shape does not match the norm weights");
  }
}

double pair_kernel(const NormWeights& w, int m, int k) {
  const double dt = w.grid.dt();
  return dt * dt / std::pow(std::abs(w.grid.time(m) - w.grid.time(k)), 1.5);
}

/// Sum over k != m of the pair terms for a fixed row m.
double h_quarter_row(const InterfaceTrace& trace, const NormWeights& w, int m) {
  double row = 0.0;
  for (int k = 1; k <= w.grid.steps; ++k) {
    if (k == m) continue;
    const Eigen::VectorXd diff = (trace.values.row(m) - trace.values.row(k)).transpose();
    const double sq = 0.5 * diff.dot((w.interface_mass[m] + w.interface_mass[k]) * diff);
    row += pair_kernel(w, m, k) * sq;
  }
  return row;
}

double boundary_weight_term(const InterfaceTrace& trace, const NormWeights& w) {
  if (!w.lions_magenes) return 0.0;
  double sum = 0.0;
  for (int m = 1; m <= w.grid.steps; ++m) {
    const Eigen::VectorXd row = trace.values.row(m).transpose();
    sum += w.grid.dt() * row.dot(w.interface_mass[m] * row) / w.grid.time(m);
  }
  return sum;
}

}  // namespace

NormWeights make_norm_weights(const Problem& problem, bool lions_magenes) {
  NormWeights w;
  w.grid = problem.grid;
  w.dim = problem.mesh.dim();
  w.lions_magenes = lions_magenes;
  const SubMesh& mesh = problem.sub(1);
  for (int m = 0; m <= problem.grid.steps; ++m) {
    w.interface_mass.push_back(interface_mass_free(mesh, problem.map, problem.grid.time(m)));
  }
  if (w.dim == 2) {
    const double h = problem.mesh.h();
    for (int node : mesh.interface_nodes) {
      const double y = mesh.nodes[node][1];
      w.coords.push_back(y);
      w.node_weight.push_back(h);
      w.endpoint_distance.push_back(std::min(y, 1.0 - y));
    }
  }
  return w;
}

double l2_interface_norm(const InterfaceTrace& trace, const NormWeights& w) {
  check_primal(trace, w);
  double sum = 0.0;
  for (int m = 1; m <= w.grid.steps; ++m) {
    const Eigen::VectorXd row = trace.values.row(m).transpose();
    sum += w.grid.dt() * row.dot(w.interface_mass[m] * row);
  }
  return std::sqrt(std::max(sum, 0.0));
}

double h_quarter_seminorm(const InterfaceTrace& trace, const NormWeights& w, Exec exec) {
  check_primal(trace, w);
  const int steps = w.grid.steps;
  double pair_sum = 0.0;
  if (exec == Exec::serial) {
    for (int m = 1; m <= steps; ++m) {
      for (int k = 1; k <= steps; ++k) {
        if (k == m) continue;
        const Eigen::VectorXd diff = (trace.values.row(m) - trace.values.row(k)).transpose();
        pair_sum += pair_kernel(w, m, k) * 0.5 * diff.dot((w.interface_mass[m] + w.interface_mass[k]) * diff);
      }
    }
  } else {
    std::vector<double> rows(static_cast<size_t>(steps) + 1, 0.0);
#pragma omp parallel for schedule(static)
    for (int m = 1; m <= steps; ++m) rows[m] = h_quarter_row(trace, w, m);
    // Fixed-order reduction keeps results independent of the worker count.
    for (int m = 1; m <= steps; ++m) pair_sum += rows[m];
  }
  return std::sqrt(std::max(pair_sum + boundary_weight_term(trace, w), 0.0));
}

LambdaSeminorm lambda_seminorm(const Eigen::VectorXd& row, const NormWeights& w) {
  if (w.dim == 1) return {0.0, true};
  const int n = w.num_interface();
  if (row.size() != n) throw Error(ErrorKind::input, kModule, "lambda_seminorm: row length mismatch");
  double sum = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const double d = w.coords[a] - w.coords[b];
      const double diff = row[a] - row[b];
      sum += w.node_weight[a] * w.node_weight[b] * diff * diff / (d * d);
    }
    sum += w.node_weight[a] * row[a] * row[a] / w.endpoint_distance[a];
  }
  return {std::sqrt(sum), false};
}

double z_norm(const InterfaceTrace& trace, const NormWeights& w, Exec exec) {
  const double hq = h_quarter_seminorm(trace, w, exec);
  const double l2 = l2_interface_norm(trace, w);
  double spatial = 0.0;
  if (w.dim == 2) {
    for (int m = 1; m <= w.grid.steps; ++m) {
      const double lam = lambda_seminorm(trace.values.row(m).transpose(), w).value;
      spatial += w.grid.dt() * lam * lam;
    }
  }
  return std::sqrt(hq * hq + spatial + l2 * l2);
}

Eigen::MatrixXd l2_gram(const NormWeights& w) {
  const int n = w.num_interface();
  const int steps = w.grid.steps;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(steps * n, steps * n);
  for (int m = 1; m <= steps; ++m) g.block((m - 1) * n, (m - 1) * n, n, n) = w.grid.dt() * w.interface_mass[m];
  return g;
}

Eigen::MatrixXd z_gram(const NormWeights& w) {
  const int n = w.num_interface();
  const int steps = w.grid.steps;
  Eigen::MatrixXd g = l2_gram(w);
  for (int m = 1; m <= steps; ++m) {
    const int bm = (m - 1) * n;
    for (int k = 1; k <= steps; ++k) {
      if (k == m) continue;
      const int bk = (k - 1) * n;
      // Ordered pair (m,k); (k,m) is visited separately, matching the double sum.
      const Eigen::MatrixXd avg = pair_kernel(w, m, k) * 0.5 * (w.interface_mass[m] + w.interface_mass[k]);
      g.block(bm, bm, n, n) += avg;
      g.block(bk, bk, n, n) += avg;
      g.block(bm, bk, n, n) -= avg;
      g.block(bk, bm, n, n) -= avg;
    }
    if (w.lions_magenes) g.block(bm, bm, n, n) += w.grid.dt() / w.grid.time(m) * w.interface_mass[m];
  }
  if (w.dim == 2) {
    Eigen::MatrixXd lam = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        const double d = w.coords[a] - w.coords[b];
        const double c = w.node_weight[a] * w.node_weight[b] / (d * d);
        lam(a, a) += c;
        lam(b, b) += c;
        lam(a, b) -= c;
        lam(b, a) -= c;
      }
      lam(a, a) += w.node_weight[a] / w.endpoint_distance[a];
    }
    for (int m = 1; m <= steps; ++m) g.block((m - 1) * n, (m - 1) * n, n, n) += w.grid.dt() * lam;
  }
  return g;
}

DFormCheck d_form_check(const Problem& problem, const SpaceTimeField& field) {
  const SubMesh& mesh = problem.mesh.part(field.tag);
  if (field.nodes() != mesh.num_nodes() || field.levels() != problem.grid.levels()) {
    throw Error(ErrorKind::input, kModule, "d_form_check: field does not match the problem");
  }
  if (field.values.row(0).cwiseAbs().maxCoeff() != 0.0) {
    throw Error(ErrorKind::misuse, kModule, "d_form_check requires a zero initial row");
  }
  const TimeGrid& grid = problem.grid;
  DFormCheck out;
  SparseMatrix mass_now =
      assemble_weighted_mass(mesh, problem.map, problem.coeffs, grid.time(0), MassWeight::plain_J, problem.exec);
  for (int m = 0; m < grid.steps; ++m) {
    const double t_next = grid.time(m + 1);
    const SparseMatrix mass_next =
        assemble_weighted_mass(mesh, problem.map, problem.coeffs, t_next, MassWeight::plain_J, problem.exec);
    const SparseMatrix div_mass =
        assemble_weighted_mass(mesh, problem.map, problem.coeffs, t_next, MassWeight::div_w_J, problem.exec);
    const Eigen::VectorXd v_now = field.values.row(m).transpose();
    const Eigen::VectorXd v_next = field.values.row(m + 1).transpose();
    out.d_value += (mass_next * v_next - mass_now * v_now).dot(v_next);
    out.bound += 0.5 * grid.dt() * v_next.dot(div_mass * v_next);
    mass_now = mass_next;
  }
  out.slack = out.d_value - out.bound;
  return out;
}

}  // namespace evodd
