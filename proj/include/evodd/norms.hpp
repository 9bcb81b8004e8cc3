#pragma once

#include "evodd/fields.hpp"
#include "evodd/parallel.hpp"
#include "evodd/stepping.hpp"

#include <vector>

namespace evodd {

/// Weights of the discrete interface norms.
struct NormWeights {
  TimeGrid grid;
  int dim = 1;
  /// B(t_m) on the free interface nodes, m = 0..M.
  std::vector<Eigen::MatrixXd> interface_mass;
  /// Reference coordinate along Gamma, lumped node weight and distance to the
  /// nearest Gamma endpoint, per free interface node (2D only).
  std::vector<double> coords;
  std::vector<double> node_weight;
  std::vector<double> endpoint_distance;
  /// Include the t^{-1} weight of the temporal Lions-Magenes norm (plain H^{1/4} otherwise).
  bool lions_magenes = true;

  int num_interface() const { return interface_mass.empty() ? 0 : static_cast<int>(interface_mass[0].rows()); }
};

NormWeights make_norm_weights(const Problem& problem, bool lions_magenes = true);

/// sqrt(sum_{m>=1} dt (B(t_m) eta_m) . eta_m)
double l2_interface_norm(const InterfaceTrace& trace, const NormWeights& w);

/// Temporal H^{1/4} Slobodeckij seminorm over levels 1..M, diagonal excluded,
/// plus the t^{-1} extension-by-zero weight when `w.lions_magenes`.
double h_quarter_seminorm(const InterfaceTrace& trace, const NormWeights& w, Exec exec = Exec::parallel);

struct LambdaSeminorm {
  double value = 0.0;
  bool trivial = false;  ///< set for dim == 1, where the interface is a point
};

/// Spatial H^{1/2} Slobodeckij sum over free Gamma nodes (|x-y|^2 kernel) plus the
/// endpoint-distance weight standing in for extension by zero.
LambdaSeminorm lambda_seminorm(const Eigen::VectorXd& row, const NormWeights& w);

double z_norm(const InterfaceTrace& trace, const NormWeights& w, Exec exec = Exec::parallel);

/// Gram matrices of the squared norms on flattened traces (levels 1..M, time-major).
Eigen::MatrixXd l2_gram(const NormWeights& w);
Eigen::MatrixXd z_gram(const NormWeights& w);

struct DFormCheck {
  double d_value = 0.0;
  double bound = 0.0;
  double slack = 0.0;
};

/// d_h(V,V) = sum_m (M(t_{m+1}) V^{m+1} - M(t_m) V^m) . V^{m+1} against
/// 1/2 sum_m dt (W(t_{m+1}) V^{m+1}) . V^{m+1}, W the div-w weighted mass.
/// `field` may live on any of the problem's meshes.
DFormCheck d_form_check(const Problem& problem, const SpaceTimeField& field);

}  // namespace evodd
