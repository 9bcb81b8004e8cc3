#pragma once

#include "evodd/fields.hpp"
#include "evodd/norms.hpp"
#include "evodd/stepping.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace evodd {

/// Shared state for interface operators: the problem plus the Riesz blocks B(t_m).
///
/// The Riesz map sends a primal trace eta to the dual trace with rows B(t_m) eta_m;
/// under the dual pairing this is the L2(0,T; L2(Gamma)) inner product, i.e. the
/// block-diagonal Gram dt * B(t_m) on flattened traces.
class SteklovContext {
 public:
  explicit SteklovContext(const Problem& problem);

  const Problem& problem() const noexcept { return *problem_; }
  const NormWeights& weights() const noexcept { return weights_; }
  const Eigen::MatrixXd& riesz_block(int m) const { return weights_.interface_mass.at(m); }
  int num_interface() const noexcept { return problem_->num_interface(); }
  /// D = M * (free interface nodes)
  int dense_size() const noexcept { return problem_->grid.steps * num_interface(); }

  InterfaceTrace riesz(const InterfaceTrace& eta) const;
  /// Riesz map on flattened traces (density convention), block-diagonal B(t_m).
  Eigen::MatrixXd riesz_matrix() const;

  InterfaceTrace zero_primal() const;
  InterfaceTrace zero_dual() const;

 private:
  const Problem* problem_;
  NormWeights weights_;
};

/// S_i eta: conormal flux of the Dirichlet solve with data eta and zero source.
InterfaceTrace apply_steklov(const SteklovContext& ctx, int i, const InterfaceTrace& eta);

/// chi_i = -conormal(G_i f_i), so that the interface equation reads S eta = chi_1 + chi_2.
InterfaceTrace chi_functional(const SteklovContext& ctx, int i);

/// Columns are S_i applied to unit traces (levels 1..M, time-major). Independent
/// columns are computed concurrently under Exec::parallel.
Eigen::MatrixXd assemble_steklov_dense(const SteklovContext& ctx, int i, int cap = 5000,
                                       Exec exec = Exec::parallel);

struct CoercivityReport {
  double lambda_min = 0.0;  ///< min eigenvalue of the symmetric part in the Riesz-orthonormal basis
  double sigma_max = 0.0;   ///< max singular value in the same basis
  double lambda_min_z = 0.0;
  double sigma_max_z = 0.0;
};

/// `steklov` is a dense operator in the density convention returned by assemble_steklov_dense.
CoercivityReport coercivity_check(const Eigen::MatrixXd& steklov, const NormWeights& weights);

enum class Method { robin_robin, dirichlet_neumann, neumann_neumann };
enum class ReferenceMode { monolithic, fixed_point };
enum class Status { converged, maxiter, diverged };

std::string_view to_string(Method m) noexcept;
std::string_view to_string(Status s) noexcept;
Method method_from_string(std::string_view name);

struct IterationConfig {
  Method method = Method::robin_robin;
  double s0 = 1.0;
  double s1 = 0.5;
  double s2 = 0.25;
  double s3 = 0.25;
  double tol = 1e-8;
  int maxiter = 200;
  ReferenceMode reference = ReferenceMode::monolithic;
  /// Robin-data cross-check against the flux-recovery form every k sweeps (0 disables).
  int crosscheck_every = 1;
  bool keep_trace_history = false;

  void validate() const;
};

struct IterationRow {
  int n = 0;
  double err_z = 0.0;
  double err_l2 = 0.0;
  double increment_z = 0.0;
  double pairing = 0.0;
  double wallclock_ms = 0.0;
};

struct SolverReport {
  Method method = Method::robin_robin;
  Status status = Status::maxiter;
  int iterations = 0;
  std::vector<IterationRow> rows;
  /// Final interface traces; for DN/NN both equal the single iterate.
  InterfaceTrace eta1;
  InterfaceTrace eta2;
  /// Final subdomain solutions.
  SpaceTimeField u1;
  SpaceTimeField u2;
  /// Max nodal |glued - monolithic| (NaN without a monolithic reference or when gluing fails).
  double max_nodal_diff = std::numeric_limits<double>::quiet_NaN();
  std::string glue_message;
  /// Largest disagreement between the Robin-data update and the flux-recovery form.
  double crosscheck_max = 0.0;
  std::vector<InterfaceTrace> history1;
  std::vector<InterfaceTrace> history2;
};

SolverReport run_iteration(const SteklovContext& ctx, const IterationConfig& config, const InterfaceTrace& eta0);

/// Peaceman-Rachford recursion with dense operators (density convention):
///   (s0 R + S1) eta1 = (s0 R - S2) eta2 + chi,  (s0 R + S2) eta2 = (s0 R - S1) eta1 + chi.
struct DenseHistory {
  std::vector<Eigen::VectorXd> eta1;
  std::vector<Eigen::VectorXd> eta2;
};
DenseHistory dense_peaceman_rachford(const Eigen::MatrixXd& s1, const Eigen::MatrixXd& s2, const Eigen::VectorXd& chi,
                                     const Eigen::MatrixXd& riesz, double s0, const Eigen::VectorXd& eta2_initial,
                                     int sweeps);

}  // namespace evodd
