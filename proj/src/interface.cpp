#include "evodd/interface.hpp"

#include "evodd/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <chrono>
#include <cmath>
#include <exception>
#include <sstream>

namespace evodd {

namespace {

constexpr const char* kModule = "interface";

using Clock = std::chrono::steady_clock;

/// Runs two independent tasks, concurrently under Exec::parallel. Exceptions are
/// carried out of the OpenMP region and rethrown.
template <class F1, class F2>
void invoke_pair(Exec exec, F1&& f1, F2&& f2) {
  std::exception_ptr e1;
  std::exception_ptr e2;
  auto guarded = [](auto& f, std::exception_ptr& slot) {
    try {
      f();
    } catch (...) {
      slot = std::current_exception();
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel sections
    {
#pragma omp section
      guarded(f1, e1);
#pragma omp section
      guarded(f2, e2);
    }
  } else {
    guarded(f1, e1);
    guarded(f2, e2);
  }
  if (e1) std::rethrow_exception(e1);
  if (e2) std::rethrow_exception(e2);
}

InterfaceTrace primal_difference(const InterfaceTrace& a, const InterfaceTrace& b) {
  return InterfaceTrace(TraceFlavor::primal, a.values - b.values);
}

InterfaceTrace dual_from(Eigen::MatrixXd values) {
  return InterfaceTrace(TraceFlavor::dual, std::move(values));
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

/// Residual chi - S eta = -(lambda_1 + lambda_2) evaluated on the reconstructions
/// u_i = F_i eta + G_i f_i, which are returned alongside.
struct SteklovResidual {
  InterfaceTrace residual;
  SpaceTimeField u1;
  SpaceTimeField u2;
};

SteklovResidual steklov_residual(const SteklovContext& ctx, const InterfaceTrace& eta) {
  const Problem& p = ctx.problem();
  SteklovResidual out;
  InterfaceTrace lam1;
  InterfaceTrace lam2;
  invoke_pair(
      p.exec,
      [&] {
        out.u1 = solve_subdomain(p, 1, DirichletData{eta}, p.source);
        lam1 = conormal_residual(p, 1, out.u1, p.source);
      },
      [&] {
        out.u2 = solve_subdomain(p, 2, DirichletData{eta}, p.source);
        lam2 = conormal_residual(p, 2, out.u2, p.source);
      });
  out.residual = dual_from(-(lam1.values + lam2.values));
  return out;
}

InterfaceTrace neumann_inverse(const SteklovContext& ctx, int i, const InterfaceTrace& mu) {
  const Problem& p = ctx.problem();
  const SpaceTimeField u = solve_subdomain(p, i, NeumannData{mu}, SourceSpec::zero());
  return trace_of(p.mesh, u);
}

struct Reference {
  SpaceTimeField monolithic;
  InterfaceTrace eta;
  InterfaceTrace lambda1;
  InterfaceTrace lambda2;
};

Reference make_reference(const SteklovContext& ctx) {
  const Problem& p = ctx.problem();
  Reference ref;
  ref.monolithic = solve_monolithic(p);
  const SpaceTimeField r1 = restrict_field(p.mesh, ref.monolithic, 1);
  const SpaceTimeField r2 = restrict_field(p.mesh, ref.monolithic, 2);
  ref.eta = trace_of(p.mesh, r1);
  ref.lambda1 = conormal_residual(p, 1, r1, p.source);
  ref.lambda2 = conormal_residual(p, 2, r2, p.source);
  return ref;
}

void finish_reconstruction(const SteklovContext& ctx, const IterationConfig& config, const Reference* ref,
                           SolverReport& report) {
  if (ref == nullptr) return;
  const double tol = std::max(10.0 * config.tol, 1e-7);
  try {
    const SpaceTimeField glued = glue(ctx.problem().mesh, report.u1, report.u2, tol);
    report.max_nodal_diff = (glued.values - ref->monolithic.values).cwiseAbs().maxCoeff();
  } catch (const Error& e) {
    report.glue_message = e.what();
  }
}

bool diverging(const std::vector<IterationRow>& rows) {
  if (rows.size() < 6) return false;
  const double now = rows.back().err_z;
  const double before = rows[rows.size() - 6].err_z;
  return std::isfinite(now) && std::isfinite(before) && before > 0.0 && now > 10.0 * before;
}

}  // namespace

SteklovContext::SteklovContext(const Problem& problem) : problem_(&problem), weights_(make_norm_weights(problem)) {}

InterfaceTrace SteklovContext::riesz(const InterfaceTrace& eta) const {
  if (eta.flavor != TraceFlavor::primal) throw Error(ErrorKind::input, kModule, "Riesz map takes a primal trace");
  InterfaceTrace out(TraceFlavor::dual, eta.levels(), eta.nodes());
  for (int m = 1; m < eta.levels(); ++m) {
    out.values.row(m) = (riesz_block(m) * eta.values.row(m).transpose()).transpose();
  }
  return out;
}

Eigen::MatrixXd SteklovContext::riesz_matrix() const {
  const int n = num_interface();
  const int steps = problem_->grid.steps;
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(steps * n, steps * n);
  for (int m = 1; m <= steps; ++m) r.block((m - 1) * n, (m - 1) * n, n, n) = riesz_block(m);
  return r;
}

InterfaceTrace SteklovContext::zero_primal() const {
  return InterfaceTrace::zeros(TraceFlavor::primal, problem_->grid, num_interface());
}

InterfaceTrace SteklovContext::zero_dual() const {
  return InterfaceTrace::zeros(TraceFlavor::dual, problem_->grid, num_interface());
}

InterfaceTrace apply_steklov(const SteklovContext& ctx, int i, const InterfaceTrace& eta) {
  if (eta.flavor != TraceFlavor::primal) throw Error(ErrorKind::input, kModule, "S_i takes a primal trace");
  if (eta.levels() > 0 && eta.values.row(0).cwiseAbs().maxCoeff() != 0.0) {
    throw Error(ErrorKind::input, kModule, "trace must vanish at the initial level");
  }
  const Problem& p = ctx.problem();
  const SourceSpec zero = SourceSpec::zero();
  const SpaceTimeField u = solve_subdomain(p, i, DirichletData{eta}, zero);
  return conormal_residual(p, i, u, zero);
}

InterfaceTrace chi_functional(const SteklovContext& ctx, int i) {
  const Problem& p = ctx.problem();
  const SpaceTimeField g = solve_subdomain(p, i, zero_dirichlet(p), p.source);
  InterfaceTrace lambda = conormal_residual(p, i, g, p.source);
  lambda.values = -lambda.values;
  return lambda;
}

Eigen::MatrixXd assemble_steklov_dense(const SteklovContext& ctx, int i, int cap, Exec exec) {
  const int size = ctx.dense_size();
  if (size > cap) {
    std::ostringstream msg;
    msg << "dense Steklov size " << size << " exceeds cap " << cap;
    throw Error(ErrorKind::configuration, kModule, msg.str());
  }
  const int n = ctx.num_interface();
  Eigen::MatrixXd dense(size, size);
  std::vector<std::exception_ptr> errors(static_cast<size_t>(size));
  auto column = [&](int j) {
    try {
      InterfaceTrace unit = ctx.zero_primal();
      unit.values(j / n + 1, j % n) = 1.0;
      dense.col(j) = flatten(apply_steklov(ctx, i, unit));
    } catch (...) {
      errors[j] = std::current_exception();
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < size; ++j) column(j);
  } else {
    for (int j = 0; j < size; ++j) column(j);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return dense;
}

CoercivityReport coercivity_check(const Eigen::MatrixXd& steklov, const NormWeights& weights) {
  const Eigen::Index size = steklov.rows();
  if (steklov.cols() != size || size != static_cast<Eigen::Index>(weights.grid.steps) * weights.num_interface()) {
    throw Error(ErrorKind::input, kModule, "coercivity_check: operator size does not match the weights");
  }
  // Bilinear form <S eta, mu> = mu^T (dt S) eta on flattened traces.
  const Eigen::MatrixXd form = weights.grid.dt() * steklov;
  auto against = [&](const Eigen::MatrixXd& gram, double& lmin, double& smax) {
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorKind::numerical_failure, kModule, "norm Gram matrix is not SPD");
    }
    const Eigen::MatrixXd left = llt.matrixL().solve(form);
    const Eigen::MatrixXd scaled = llt.matrixL().solve(left.transpose()).transpose();
    const Eigen::MatrixXd sym = 0.5 * (scaled + scaled.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw Error(ErrorKind::numerical_failure, kModule, "eigen-solver failure");
    lmin = eig.eigenvalues().minCoeff();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(scaled);
    smax = svd.singularValues().maxCoeff();
  };
  CoercivityReport report;
  against(l2_gram(weights), report.lambda_min, report.sigma_max);
  against(z_gram(weights), report.lambda_min_z, report.sigma_max_z);
  return report;
}

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::robin_robin: return "robin_robin";
    case Method::dirichlet_neumann: return "dirichlet_neumann";
    case Method::neumann_neumann: return "neumann_neumann";
  }
  return "?";
}

std::string_view to_string(Status s) noexcept {
  switch (s) {
    case Status::converged: return "converged";
    case Status::maxiter: return "maxiter";
    case Status::diverged: return "diverged";
  }
  return "?";
}

Method method_from_string(std::string_view name) {
  if (name == "robin_robin") return Method::robin_robin;
  if (name == "dirichlet_neumann") return Method::dirichlet_neumann;
  if (name == "neumann_neumann") return Method::neumann_neumann;
  throw Error(ErrorKind::configuration, kModule, "unknown method '" + std::string(name) + "'");
}

void IterationConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw Error(ErrorKind::configuration, kModule, std::string(name) + " must be positive");
  };
  positive(s0, "s0");
  positive(s1, "s1");
  positive(s2, "s2");
  positive(s3, "s3");
  positive(tol, "tol");
  if (maxiter < 0) throw Error(ErrorKind::configuration, kModule, "maxiter must be >= 0");
}

SolverReport run_iteration(const SteklovContext& ctx, const IterationConfig& config, const InterfaceTrace& eta0) {
  config.validate();
  const Problem& p = ctx.problem();
  const NormWeights& w = ctx.weights();
  if (eta0.flavor != TraceFlavor::primal || eta0.levels() != p.grid.levels() || eta0.nodes() != ctx.num_interface()) {
    throw Error(ErrorKind::input, kModule, "initial guess has the wrong shape or flavor");
  }
  if (eta0.values.row(0).cwiseAbs().maxCoeff() != 0.0) {
    throw Error(ErrorKind::input, kModule, "initial guess must vanish at level 0");
  }

  std::optional<Reference> ref;
  if (config.reference == ReferenceMode::monolithic) ref = make_reference(ctx);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  SolverReport report;
  report.method = config.method;
  const auto start = Clock::now();

  auto error_of = [&](const InterfaceTrace& eta, double& z, double& l2) {
    if (!ref) {
      z = nan;
      l2 = nan;
      return;
    }
    const InterfaceTrace e = primal_difference(eta, ref->eta);
    z = z_norm(e, w, p.exec);
    l2 = l2_interface_norm(e, w);
  };
  auto converged = [&](const IterationRow& row) {
    return config.reference == ReferenceMode::monolithic ? row.err_z <= config.tol : row.increment_z <= config.tol;
  };

  if (config.method == Method::robin_robin) {
    const double s0 = config.s0;
    // u_2^0 = F_2 eta0 + G_2 f_2; its Robin data s0 R eta0 - lambda_2 starts the sweep.
    SpaceTimeField u2 = solve_subdomain(p, 2, DirichletData{eta0}, p.source);
    InterfaceTrace lam2 = conormal_residual(p, 2, u2, p.source);
    InterfaceTrace r2 = dual_from(s0 * ctx.riesz(eta0).values - lam2.values);
    InterfaceTrace eta2 = eta0;
    InterfaceTrace eta1 = eta0;
    SpaceTimeField u1 = solve_subdomain(p, 1, DirichletData{eta0}, p.source);

    if (ref) {
      IterationRow row0;
      error_of(eta0, row0.err_z, row0.err_l2);
      if (row0.err_z <= config.tol) {
        report.status = Status::converged;
        report.eta1 = eta1;
        report.eta2 = eta2;
        report.u1 = std::move(u1);
        report.u2 = std::move(u2);
        finish_reconstruction(ctx, config, &*ref, report);
        return report;
      }
    }

    for (int n = 1; n <= config.maxiter; ++n) {
      const InterfaceTrace eta2_prev = eta2;
      u1 = solve_subdomain(p, 1, RobinData{s0, r2}, p.source);
      eta1 = trace_of(p.mesh, u1);
      const InterfaceTrace r1 = dual_from(2.0 * s0 * ctx.riesz(eta1).values - r2.values);
      u2 = solve_subdomain(p, 2, RobinData{s0, r1}, p.source);
      eta2 = trace_of(p.mesh, u2);
      r2 = dual_from(2.0 * s0 * ctx.riesz(eta2).values - r1.values);

      const bool check = config.crosscheck_every > 0 && n % config.crosscheck_every == 0;
      const bool need_flux = check || ref.has_value();
      InterfaceTrace lam1;
      if (need_flux) {
        lam1 = conormal_residual(p, 1, u1, p.source);
        lam2 = conormal_residual(p, 2, u2, p.source);
      }
      if (check) {
        const double d1 = (r1.values - (s0 * ctx.riesz(eta1).values - lam1.values)).cwiseAbs().maxCoeff();
        const double d2 = (r2.values - (s0 * ctx.riesz(eta2).values - lam2.values)).cwiseAbs().maxCoeff();
        report.crosscheck_max = std::max({report.crosscheck_max, d1, d2});
      }

      IterationRow row;
      row.n = n;
      double z1 = nan, l1 = nan, z2 = nan, l2 = nan;
      error_of(eta1, z1, l1);
      error_of(eta2, z2, l2);
      row.err_z = z1 + z2;
      row.err_l2 = l1 + l2;
      row.increment_z = z_norm(primal_difference(eta2, eta2_prev), w, p.exec);
      if (ref) {
        row.pairing = pairing(dual_from(lam1.values - ref->lambda1.values), primal_difference(eta1, ref->eta), p.grid) +
                      pairing(dual_from(lam2.values - ref->lambda2.values), primal_difference(eta2, ref->eta), p.grid);
      } else {
        row.pairing = nan;
      }
      row.wallclock_ms = elapsed_ms(start);
      report.rows.push_back(row);
      report.iterations = n;
      if (config.keep_trace_history) {
        report.history1.push_back(eta1);
        report.history2.push_back(eta2);
      }
      if (converged(row)) {
        report.status = Status::converged;
        break;
      }
      if (diverging(report.rows)) {
        report.status = Status::diverged;
        break;
      }
    }
    if (report.status != Status::converged && report.status != Status::diverged) report.status = Status::maxiter;
    report.eta1 = std::move(eta1);
    report.eta2 = std::move(eta2);
    report.u1 = std::move(u1);
    report.u2 = std::move(u2);
    finish_reconstruction(ctx, config, ref ? &*ref : nullptr, report);
    return report;
  }

  // Dirichlet-Neumann and Neumann-Neumann share the residual chi - S eta.
  InterfaceTrace eta = eta0;
  SteklovResidual res = steklov_residual(ctx, eta);
  if (ref) {
    IterationRow row0;
    error_of(eta, row0.err_z, row0.err_l2);
    if (row0.err_z <= config.tol) {
      report.status = Status::converged;
      report.eta1 = eta;
      report.eta2 = eta;
      report.u1 = std::move(res.u1);
      report.u2 = std::move(res.u2);
      finish_reconstruction(ctx, config, &*ref, report);
      return report;
    }
  }
  for (int n = 1; n <= config.maxiter; ++n) {
    const InterfaceTrace eta_prev = eta;
    if (config.method == Method::dirichlet_neumann) {
      const InterfaceTrace delta = neumann_inverse(ctx, 2, res.residual);
      eta.values += config.s1 * delta.values;
    } else {
      InterfaceTrace lambda1;
      InterfaceTrace lambda2;
      invoke_pair(
          p.exec, [&] { lambda1 = neumann_inverse(ctx, 1, res.residual); },
          [&] { lambda2 = neumann_inverse(ctx, 2, res.residual); });
      eta.values += config.s2 * lambda1.values + config.s3 * lambda2.values;
    }
    res = steklov_residual(ctx, eta);

    IterationRow row;
    row.n = n;
    error_of(eta, row.err_z, row.err_l2);
    row.increment_z = z_norm(primal_difference(eta, eta_prev), w, p.exec);
    // <S(eta - eta*), eta - eta*> with S eta - chi = -residual.
    row.pairing = ref ? pairing(dual_from(-res.residual.values), primal_difference(eta, ref->eta), p.grid) : nan;
    row.wallclock_ms = elapsed_ms(start);
    report.rows.push_back(row);
    report.iterations = n;
    if (config.keep_trace_history) {
      report.history1.push_back(eta);
      report.history2.push_back(eta);
    }
    if (converged(row)) {
      report.status = Status::converged;
      break;
    }
    if (diverging(report.rows)) {
      report.status = Status::diverged;
      break;
    }
  }
  if (report.status != Status::converged && report.status != Status::diverged) report.status = Status::maxiter;
  report.eta1 = eta;
  report.eta2 = eta;
  report.u1 = std::move(res.u1);
  report.u2 = std::move(res.u2);
  finish_reconstruction(ctx, config, ref ? &*ref : nullptr, report);
  return report;
}

DenseHistory dense_peaceman_rachford(const Eigen::MatrixXd& s1, const Eigen::MatrixXd& s2, const Eigen::VectorXd& chi,
                                     const Eigen::MatrixXd& riesz, double s0, const Eigen::VectorXd& eta2_initial,
                                     int sweeps) {
  const Eigen::PartialPivLU<Eigen::MatrixXd> lhs1(s0 * riesz + s1);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lhs2(s0 * riesz + s2);
  DenseHistory out;
  Eigen::VectorXd eta2 = eta2_initial;
  for (int n = 0; n < sweeps; ++n) {
    const Eigen::VectorXd eta1 = lhs1.solve((s0 * riesz - s2) * eta2 + chi);
    eta2 = lhs2.solve((s0 * riesz - s1) * eta1 + chi);
    out.eta1.push_back(eta1);
    out.eta2.push_back(eta2);
  }
  return out;
}

}  // namespace evodd
