#include "catch_amalgamated.hpp"

#include "evodd/error.hpp"
#include "evodd/harness.hpp"
#include "evodd/stepping.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace evodd;
using Catch::Approx;

namespace {

ProblemCoefficients coefficients(double beta = 1.0) {
  ProblemCoefficients c;
  c.beta = beta;
  return c;
}

Problem problem(int dim, int res, int steps, EvolutionMap map, SourceSpec src = SourceSpec::manufactured(),
                double beta = 1.0, double T = 1.0) {
  return Problem(build_decomposed_mesh(dim, res, 0.5), map, coefficients(beta), src, TimeGrid(T, steps));
}

InterfaceTrace random_trace(const Problem& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  InterfaceTrace eta(TraceFlavor::primal, p.grid.levels(), p.num_interface());
  for (int m = 1; m < eta.levels(); ++m) {
    for (int a = 0; a < eta.nodes(); ++a) eta.values(m, a) = u(rng);
  }
  return eta;
}

}  // namespace

TEST_CASE("zero data gives the zero solution", "[stepping]") {
  const auto p = problem(1, 16, 8, EvolutionMap::axis_stretch(1, Vec2(0.3, 0), 1.0), SourceSpec::zero());
  CHECK(solve_monolithic(p).values.isZero());
  const auto u1 = solve_subdomain(p, 1, zero_dirichlet(p), SourceSpec::zero());
  CHECK(u1.values.isZero());
  CHECK(conormal_residual(p, 1, u1, SourceSpec::zero()).values.isZero());
}

TEST_CASE("translation with zero velocity reproduces the identity run", "[stepping]") {
  const auto a = problem(1, 16, 16, EvolutionMap::identity(1));
  const auto b = problem(1, 16, 16, EvolutionMap::translation(1, Vec2(0, 0)));
  const double ea = manufactured_error(a, solve_monolithic(a));
  const double eb = manufactured_error(b, solve_monolithic(b));
  CHECK(std::abs(ea - eb) <= 1e-12);
}

TEST_CASE("steady 1D flux approaches the analytic value", "[stepping][oracle]") {
  // f = (pi^2 + beta) sin(pi x) held constant: u -> sin(pi x). The split sits at
  // x = 1/4 so the steady flux is nonzero.
  const double beta = 1.0;
  auto src = SourceSpec::separable(TemporalProfile::one, SpatialProfile::sine,
                                   std::numbers::pi * std::numbers::pi + beta);
  for (int res : {32, 64}) {
    const Problem p(build_decomposed_mesh(1, res, 0.25), EvolutionMap::identity(1), coefficients(beta), src,
                    TimeGrid(20.0, 400));
    const auto u = solve_monolithic(p);
    const auto u1 = restrict_field(p.mesh, u, 1);
    const auto lam = conormal_residual(p, 1, u1, src);
    // flux of Omega_1 w.r.t. nu_1 = +e_x: alpha du/dx (1/4) = pi cos(pi/4)
    const double exact = std::numbers::pi * std::cos(std::numbers::pi / 4);
    CHECK(lam.values(p.grid.steps, 0) == Approx(exact).epsilon(4.0 / res));
  }
}

TEST_CASE("fluxes of the restricted monolithic solution cancel", "[stepping][oracle]") {
  for (int dim : {1, 2}) {
    const auto p = problem(dim, 8, 8, EvolutionMap::axis_stretch(dim, Vec2(0.3, 0.2), 1.0));
    const auto u = solve_monolithic(p);
    const auto l1 = conormal_residual(p, 1, restrict_field(p.mesh, u, 1), p.source);
    const auto l2 = conormal_residual(p, 2, restrict_field(p.mesh, u, 2), p.source);
    CHECK((l1.values + l2.values).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("conormal residual rejects non-solutions", "[stepping][errors]") {
  const auto p = problem(1, 8, 4, EvolutionMap::identity(1));
  SpaceTimeField junk(MeshTag::sub1, 5, p.sub(1).num_nodes());
  junk.values(2, 1) = 1.0;
  try {
    conormal_residual(p, 1, junk, p.source);
    FAIL("expected misuse");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::misuse);
  }
}

TEST_CASE("Dirichlet solves are linear", "[stepping][property]") {
  std::mt19937_64 rng(5);
  const auto p = problem(2, 8, 6, EvolutionMap::axis_stretch(2, Vec2(0.3, 0.2), 1.0), SourceSpec::zero());
  const auto e1 = random_trace(p, rng);
  const auto e2 = random_trace(p, rng);
  InterfaceTrace sum(TraceFlavor::primal, e1.values + e2.values);
  const auto u1 = solve_subdomain(p, 2, DirichletData{e1}, SourceSpec::zero());
  const auto u2 = solve_subdomain(p, 2, DirichletData{e2}, SourceSpec::zero());
  const auto us = solve_subdomain(p, 2, DirichletData{sum}, SourceSpec::zero());
  CHECK((us.values - u1.values - u2.values).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(trace_of(p.mesh, us).values == sum.values);
}

TEST_CASE("Dirichlet-to-Neumann round trip", "[stepping][oracle]") {
  std::mt19937_64 rng(9);
  for (int dim : {1, 2}) {
    const auto p = problem(dim, 8, 6, EvolutionMap::axis_stretch(dim, Vec2(0.3, 0.2), 1.0));
    const auto eta = random_trace(p, rng);
    for (int i : {1, 2}) {
      const auto ud = solve_subdomain(p, i, DirichletData{eta}, p.source);
      const auto lam = conormal_residual(p, i, ud, p.source);
      const auto un = solve_subdomain(p, i, NeumannData{lam}, p.source);
      CHECK((un.values - ud.values).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("Robin data built from a Dirichlet solve reproduces it", "[stepping][oracle]") {
  std::mt19937_64 rng(13);
  for (int dim : {1, 2}) {
    const auto p = problem(dim, 8, 6, EvolutionMap::axis_stretch(dim, Vec2(0.3, 0.2), 1.0));
    const auto eta = random_trace(p, rng);
    const auto ud = solve_subdomain(p, 1, DirichletData{eta}, p.source);
    const auto lam = conormal_residual(p, 1, ud, p.source);
    InterfaceTrace r(TraceFlavor::dual, p.grid.levels(), p.num_interface());
    for (int m = 1; m < p.grid.levels(); ++m) {
      const Eigen::MatrixXd b = interface_mass_free(p.sub(1), p.map, p.grid.time(m));
      r.values.row(m) = (b * eta.values.row(m).transpose() + lam.values.row(m).transpose()).transpose();
    }
    const auto ur = solve_subdomain(p, 1, RobinData{1.0, r}, p.source);
    CHECK((ur.values - ud.values).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("solutions are causal", "[stepping][property]") {
  // Perturbing the Dirichlet data at level k leaves levels < k untouched.
  std::mt19937_64 rng(17);
  const auto p = problem(1, 16, 8, EvolutionMap::axis_stretch(1, Vec2(0.3, 0), 1.0));
  const auto eta = random_trace(p, rng);
  auto bumped = eta;
  bumped.values(5, 0) += 1.0;
  const auto a = solve_subdomain(p, 1, DirichletData{eta}, p.source);
  const auto b = solve_subdomain(p, 1, DirichletData{bumped}, p.source);
  CHECK(a.values.topRows(5) == b.values.topRows(5));
  CHECK((a.values.row(5) - b.values.row(5)).norm() > 0.0);
}

TEST_CASE("conservative and nonconservative schemes agree to O(dt)", "[stepping]") {
  const auto map = EvolutionMap::axis_stretch(1, Vec2(0.3, 0), 1.0);
  double prev = 0.0;
  for (int steps : {16, 32, 64}) {
    const Problem a(build_decomposed_mesh(1, 32, 0.5), map, coefficients(), SourceSpec::manufactured(),
                    TimeGrid(1.0, steps), Scheme::conservative);
    const Problem b(build_decomposed_mesh(1, 32, 0.5), map, coefficients(), SourceSpec::manufactured(),
                    TimeGrid(1.0, steps), Scheme::nonconservative);
    const double diff = (solve_monolithic(a).values - solve_monolithic(b).values).cwiseAbs().maxCoeff();
    if (prev > 0.0) CHECK(diff < 0.7 * prev);
    prev = diff;
  }
}

TEST_CASE("manufactured solution converges in space and time", "[stepping][oracle]") {
  ExperimentConfig cfg;
  cfg.evolution.kind = EvolutionKind::identity;
  cfg.evolution.a = {0.0};
  cfg.evolution.b = {0.0};
  cfg.coefficients.beta = 1.0;
  const auto table = mms_convergence_study(cfg, 3);
  CHECK(table.spatial.back().order == Approx(2.0).margin(0.2));
  CHECK(table.temporal.back().order >= 0.8);
}

TEST_CASE("problem rejects mismatched dimensions", "[stepping][errors]") {
  CHECK_THROWS_AS(Problem(build_decomposed_mesh(2, 4, 0.5), EvolutionMap::identity(1), coefficients(),
                          SourceSpec::zero(), TimeGrid(1.0, 4)),
                  Error);
  CHECK_THROWS_AS(TimeGrid(1.0, 0), Error);
  CHECK_THROWS_AS(TimeGrid(-1.0, 4), Error);
}
