#include "evodd/verify.hpp"

#include "evodd/error.hpp"
#include "evodd/harness.hpp"
#include "evodd/interface.hpp"
#include "evodd/norms.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

namespace evodd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct MapCase {
  std::string name;
  EvolutionMap map;
};

std::vector<MapCase> catalog(int dim) {
  if (dim == 1) {
    return {{"identity", EvolutionMap::identity(1)},
            {"translation", EvolutionMap::translation(1, Vec2(0.5, 0.0))},
            {"axis_stretch", EvolutionMap::axis_stretch(1, Vec2(0.3, 0.0), 1.0)}};
  }
  return {{"identity", EvolutionMap::identity(2)},
          {"translation", EvolutionMap::translation(2, Vec2(0.5, 0.25))},
          {"axis_stretch", EvolutionMap::axis_stretch(2, Vec2(0.3, 0.2), 1.0)}};
}

ProblemCoefficients unit_coefficients() {
  ProblemCoefficients c;
  c.alpha.c0 = 1.0;
  c.beta = 1.0;
  return c;
}

Problem make(int dim, int resolution, int steps, const EvolutionMap& map,
             SourceSpec source = SourceSpec::manufactured()) {
  return Problem(build_decomposed_mesh(dim, resolution, 0.5), map, unit_coefficients(), source, TimeGrid(1.0, steps));
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(3) << std::scientific << v;
  return s.str();
}

/// Default moving configuration of the Robin-Robin study.
Problem moving_problem() {
  return make(1, 64, 64, EvolutionMap::axis_stretch(1, Vec2(0.3, 0.0), 1.0));
}

class Suite {
 public:
  explicit Suite(const VerifyOptions& options) : options_(options), rng_(options.seed) {}

  std::vector<CriterionResult> run() {
    record(1, "transmission equivalence", [&](std::string& d) { return transmission(d); });
    record(2, "Robin-Robin convergence", [&](std::string& d) { return robin_convergence(d); });
    record(3, "Steklov-Poincare coercivity", [&](std::string& d) { return coercivity(d); });
    record(4, "discrete d-form bound", [&](std::string& d) { return d_form(d); });
    record(5, "Jacobi formula order", [&](std::string& d) { return jacobi(d); });
    record(6, "bi-Lipschitz sampling", [&](std::string& d) { return bilipschitz(d); });
    record(7, "manufactured-solution orders", [&](std::string& d) { return mms(d); });
    record(8, "RR/PR equivalence", [&](std::string& d) { return rr_pr(d); });
    record(9, "monotone error pairing", [&](std::string& d) { return monotone_pairing(d); });
    record(10, "DN/NN well-definedness", [&](std::string& d) { return dn_nn(d); });
    return results_;
  }

 private:
  template <class Check>
  void record(int id, const std::string& name, Check&& check) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    const auto start = Clock::now();
    try {
      r.passed = check(r.detail);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail += std::string(" exception: ") + e.what();
    }
    r.seconds = seconds_since(start);
    if (options_.on_result) options_.on_result(r);
    results_.push_back(std::move(r));
  }

  bool transmission(std::string& detail) {
    bool ok = true;
    std::ostringstream d;
    for (int dim : {1, 2}) {
      const int res = dim == 1 ? 64 : 16;
      const int steps = dim == 1 ? 64 : 32;
      for (const auto& mc : catalog(dim)) {
        const auto start = Clock::now();
        const EquivalenceResult eq = compare_dd_vs_monolithic(make(dim, res, steps, mc.map));
        const double secs = seconds_since(start);
        const bool pass = eq.max_rel_diff <= 1e-10 && secs <= 30.0;
        ok = ok && pass;
        d << dim << "D/" << mc.name << " rel=" << fmt(eq.max_rel_diff) << " (" << std::setprecision(2) << secs
          << "s); ";
      }
    }
    detail = d.str();
    return ok;
  }

  const SolverReport& moving_report() {
    if (!moving_) {
      moving_problem_ = std::make_unique<Problem>(moving_problem());
      const SteklovContext ctx(*moving_problem_);
      IterationConfig cfg;
      cfg.method = Method::robin_robin;
      cfg.s0 = 1.0;
      cfg.tol = 1e-8;
      cfg.maxiter = 200;
      const auto start = Clock::now();
      moving_ = std::make_unique<SolverReport>(run_iteration(ctx, cfg, ctx.zero_primal()));
      moving_seconds_ = seconds_since(start);
    }
    return *moving_;
  }

  bool robin_convergence(std::string& detail) {
    const SolverReport& r = moving_report();
    bool monotone = true;
    for (size_t k = 1; k < r.rows.size(); ++k) {
      if (!(r.rows[k].err_z < r.rows[k - 1].err_z)) monotone = false;
    }
    const bool reached = r.status == Status::converged && !r.rows.empty() && r.rows.back().err_z <= 1e-8 &&
                         r.iterations <= 200;
    const double glue_tol = std::max(10.0 * 1e-8, 1e-7);
    const bool glued = std::isfinite(r.max_nodal_diff) && r.max_nodal_diff <= glue_tol;
    const bool fast = moving_seconds_ <= 120.0;
    std::ostringstream d;
    d << "sweeps=" << r.iterations << " final err_Z=" << (r.rows.empty() ? 0.0 : r.rows.back().err_z)
      << " monotone=" << monotone << " glued diff=" << fmt(r.max_nodal_diff) << " time=" << std::setprecision(3)
      << moving_seconds_ << "s";
    detail = d.str();
    return monotone && reached && glued && fast;
  }

  bool coercivity(std::string& detail) {
    bool ok = true;
    std::ostringstream d;
    const auto start = Clock::now();
    for (int dim : {1, 2}) {
      const int res = dim == 1 ? 16 : 8;
      const int steps = dim == 1 ? 16 : 8;
      for (const auto& mc : catalog(dim)) {
        if (mc.name == "translation") continue;
        const Problem p = make(dim, res, steps, mc.map);
        const SteklovContext ctx(p);
        const Eigen::MatrixXd s1 = assemble_steklov_dense(ctx, 1);
        const Eigen::MatrixXd s2 = assemble_steklov_dense(ctx, 2);
        const auto c1 = coercivity_check(s1, ctx.weights());
        const auto c2 = coercivity_check(s2, ctx.weights());
        const auto c = coercivity_check(s1 + s2, ctx.weights());
        const bool pass = c1.lambda_min > 0.0 && c2.lambda_min > 0.0 && c.lambda_min > 0.0;
        ok = ok && pass;
        d << dim << "D/" << mc.name << " lmin(S1,S2,S)=" << fmt(c1.lambda_min) << "," << fmt(c2.lambda_min) << ","
          << fmt(c.lambda_min) << " [Z: " << fmt(c.lambda_min_z) << "]; ";
      }
    }
    const double secs = seconds_since(start);
    detail = d.str();
    return ok && secs <= 60.0;
  }

  bool d_form(std::string& detail) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double worst = std::numeric_limits<double>::infinity();
    int cases = 0;
    const auto start = Clock::now();
    for (int dim : {1, 2}) {
      for (const auto& mc : catalog(dim)) {
        const Problem p = make(dim, dim == 1 ? 16 : 8, dim == 1 ? 32 : 8, mc.map, SourceSpec::zero());
        for (int k = 0; k < 100; ++k) {
          SpaceTimeField v(MeshTag::whole, p.grid.levels(), p.mesh.whole().num_nodes());
          for (int m = 1; m < v.levels(); ++m) {
            for (int a = 0; a < v.nodes(); ++a) v.values(m, a) = uni(rng_);
          }
          worst = std::min(worst, d_form_check(p, v).slack);
          ++cases;
        }
      }
    }
    const double secs = seconds_since(start);
    detail = std::to_string(cases) + " fields, min slack=" + fmt(worst) + ", " + fmt(secs) + "s";
    return worst >= -1e-10 && secs <= 10.0;
  }

  bool jacobi(std::string& detail) {
    std::uniform_real_distribution<double> uni_t(0.05, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> uni_x(0.0, 1.0);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    int exact = 0;
    int fails = 0;
    for (int dim : {1, 2}) {
      for (const auto& mc : catalog(dim)) {
        for (int k = 0; k < 20; ++k) {
          const double t = uni_t(rng_);
          const Vec2 x(uni_x(rng_), dim == 2 ? uni_x(rng_) : 0.0);
          const double h = 1e-2;
          const double coarse = jacobi_residual(mc.map, t, x, h);
          const double fine = jacobi_residual(mc.map, t, x, h / 2);
          if (coarse <= 1e-14 && fine <= 1e-14) {
            ++exact;  // J is constant in time: the difference quotient is exact
            continue;
          }
          const double order = std::log2(coarse / fine);
          lo = std::min(lo, order);
          hi = std::max(hi, order);
          if (!(std::abs(order - 2.0) <= 0.2)) ++fails;
        }
      }
    }
    std::ostringstream d;
    d << "observed order range [" << lo << ", " << hi << "], exact (constant J) samples=" << exact
      << ", violations=" << fails;
    detail = d.str();
    return fails == 0;
  }

  bool bilipschitz(std::string& detail) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::uniform_real_distribution<double> uni_t(0.0, 10.0);
    long violations = 0;
    long checks = 0;
    // Comparisons allow rounding: relative 1e-12 plus the cancellation error of
    // Phi(x) - Phi(y), a few ulps of the image coordinates.
    constexpr double kRound = 1e-12;
    constexpr double kUlps = 8.0 * std::numeric_limits<double>::epsilon();
    for (int dim : {1, 2}) {
      for (const auto& mc : catalog(dim)) {
        const double c = mc.map.lipschitz_lower();
        const double C = mc.map.lipschitz_upper();
        std::vector<std::pair<Vec2, Vec2>> pairs;
        for (int k = 0; k < 1000; ++k) {
          Vec2 x(uni(rng_), dim == 2 ? uni(rng_) : 0.0);
          Vec2 y(uni(rng_), dim == 2 ? uni(rng_) : 0.0);
          pairs.emplace_back(x, y);
        }
        for (int s = 0; s < 100; ++s) {
          const double t = uni_t(rng_);
          for (const auto& [x, y] : pairs) {
            const double ref = (x - y).norm();
            const Vec2 px = mc.map.forward(t, x);
            const Vec2 py = mc.map.forward(t, y);
            const double img = (px - py).norm();
            const double slack = kUlps * std::max(px.cwiseAbs().maxCoeff(), py.cwiseAbs().maxCoeff());
            ++checks;
            if (img < c * ref * (1.0 - kRound) - slack || img > C * ref * (1.0 + kRound) + slack) ++violations;
          }
        }
      }
    }
    detail = std::to_string(checks) + " checks, " + std::to_string(violations) + " violations";
    return violations == 0;
  }

  bool mms(std::string& detail) {
    bool ok = true;
    std::ostringstream d;
    const auto start = Clock::now();
    for (const auto& mc : catalog(1)) {
      ExperimentConfig cfg;
      cfg.geometry.dim = 1;
      cfg.evolution.kind = mc.map.kind();
      cfg.evolution.a = {mc.map.amplitudes()[0]};
      cfg.evolution.b = {mc.map.kind() == EvolutionKind::translation ? 0.2 : 0.0};
      cfg.evolution.omega = 1.0;
      cfg.coefficients = unit_coefficients();
      cfg.source = SourceSpec::manufactured();
      cfg.mms.levels = 3;
      const MmsTable table = mms_convergence_study(cfg, cfg.mms.levels);
      const double space = table.spatial.back().order;
      const double time = table.temporal.back().order;
      const bool pass = std::abs(space - 2.0) <= 0.2 && std::abs(time - 1.0) <= 0.2;
      ok = ok && pass;
      d << mc.name << " space=" << std::setprecision(4) << space << " time=" << time << "; ";
    }
    const double secs = seconds_since(start);
    d << "(" << std::setprecision(3) << secs << "s)";
    detail = d.str();
    return ok && secs <= 180.0;
  }

  bool rr_pr(std::string& detail) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double worst = 0.0;
    for (int dim : {1, 2}) {
      const Problem p = make(dim, dim == 1 ? 16 : 8, dim == 1 ? 16 : 8, catalog(dim)[2].map);
      const SteklovContext ctx(p);
      InterfaceTrace eta0 = ctx.zero_primal();
      for (int m = 1; m < eta0.levels(); ++m) {
        for (int a = 0; a < eta0.nodes(); ++a) eta0.values(m, a) = 0.1 * uni(rng_);
      }
      IterationConfig cfg;
      cfg.s0 = 1.0;
      cfg.maxiter = 5;
      cfg.tol = 1e-300;
      cfg.reference = ReferenceMode::fixed_point;
      cfg.keep_trace_history = true;
      const SolverReport sweep = run_iteration(ctx, cfg, eta0);

      const Eigen::MatrixXd s1 = assemble_steklov_dense(ctx, 1);
      const Eigen::MatrixXd s2 = assemble_steklov_dense(ctx, 2);
      const Eigen::VectorXd chi = flatten(chi_functional(ctx, 1)) + flatten(chi_functional(ctx, 2));
      const DenseHistory dense = dense_peaceman_rachford(s1, s2, chi, ctx.riesz_matrix(), cfg.s0, flatten(eta0), 5);
      if (sweep.history1.size() != 5) return false;
      for (int n = 0; n < 5; ++n) {
        worst = std::max(worst, (flatten(sweep.history1[n]) - dense.eta1[n]).cwiseAbs().maxCoeff());
        worst = std::max(worst, (flatten(sweep.history2[n]) - dense.eta2[n]).cwiseAbs().maxCoeff());
      }
    }
    detail = "max |sweep - dense recursion| over 5 sweeps = " + fmt(worst);
    return worst <= 1e-10;
  }

  bool monotone_pairing(std::string& detail) {
    const SolverReport& r = moving_report();
    double lowest = std::numeric_limits<double>::infinity();
    bool below = false;
    for (const auto& row : r.rows) {
      lowest = std::min(lowest, row.pairing);
      if (row.pairing < 1e-12) below = true;
    }
    detail = "min pairing=" + fmt(lowest) + ", final=" + fmt(r.rows.empty() ? 0.0 : r.rows.back().pairing);
    return !r.rows.empty() && lowest >= -1e-12 && below;
  }

  bool dn_nn(std::string& detail) {
    std::ostringstream d;
    bool ok = true;
    for (int dim : {1, 2}) {
      for (const auto& mc : catalog(dim)) {
        if (mc.name == "translation") continue;
        const Problem p = make(dim, dim == 1 ? 16 : 8, dim == 1 ? 16 : 8, mc.map);
        const SteklovContext ctx(p);
        for (Method method : {Method::dirichlet_neumann, Method::neumann_neumann}) {
          IterationConfig cfg;
          cfg.method = method;
          cfg.maxiter = 30;
          try {
            const SolverReport r = run_iteration(ctx, cfg, ctx.zero_primal());
            d << dim << "D/" << mc.name << "/" << to_string(method) << ": " << to_string(r.status) << " after "
              << r.iterations << " (err_Z=" << fmt(r.rows.empty() ? 0.0 : r.rows.back().err_z) << "); ";
          } catch (const Error& e) {
            ok = false;
            d << dim << "D/" << mc.name << "/" << to_string(method) << ": " << e.what() << "; ";
          }
        }
      }
    }
    detail = d.str();
    return ok;
  }

  VerifyOptions options_;
  std::mt19937_64 rng_;
  std::vector<CriterionResult> results_;
  std::unique_ptr<Problem> moving_problem_;
  std::unique_ptr<SolverReport> moving_;
  double moving_seconds_ = 0.0;
};

}  // namespace

std::vector<CriterionResult> run_verification_suite(const VerifyOptions& options) {
  return Suite(options).run();
}

}  // namespace evodd
