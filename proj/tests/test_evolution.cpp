#include "catch_amalgamated.hpp"

#include "evodd/coefficients.hpp"
#include "evodd/error.hpp"
#include "evodd/evolution.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace evodd;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("forward and inverse maps on closed-form points", "[evolution]") {
  const auto id = EvolutionMap::identity(1);
  CHECK(phi_forward(id, 3.7, Vec2(0.2, 0))[0] == Approx(0.2));

  const auto tr = EvolutionMap::translation(2, Vec2(1.0, 0.0));
  const Vec2 y = phi_forward(tr, 2.0, Vec2(0.5, 0.5));
  CHECK(y[0] == Approx(2.5));
  CHECK(y[1] == Approx(0.5));
  const Vec2 back = phi_inverse(tr, 2.0, Vec2(2.5, 0.5));
  CHECK(back[0] == Approx(0.5));
  CHECK(back[1] == Approx(0.5));

  const auto st = EvolutionMap::axis_stretch(1, Vec2(0.3, 0.0), 1.0);
  CHECK(phi_forward(st, kPi / 2, Vec2(0.5, 0))[0] == Approx(0.65));
  CHECK(phi_inverse(st, kPi / 2, Vec2(0.65, 0))[0] == Approx(0.5));

  const auto id2 = EvolutionMap::identity(2);
  CHECK(phi_inverse(id2, 0.3, Vec2(0.4, 0.9)).isApprox(Vec2(0.4, 0.9)));
}

TEST_CASE("negative time is rejected", "[evolution][errors]") {
  const auto id = EvolutionMap::identity(1);
  try {
    phi_forward(id, -0.1, Vec2(0.5, 0));
    FAIL("expected an input error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::input);
    CHECK(e.module() == "evolution");
  }
}

TEST_CASE("amplitude cap and degeneracy", "[evolution][errors]") {
  CHECK_THROWS_AS(EvolutionMap::axis_stretch(1, Vec2(0.95, 0.0), 1.0), Error);
  CHECK_NOTHROW(EvolutionMap::axis_stretch(1, Vec2(-0.9, 0.0), 1.0));
  CHECK_THROWS_AS(evolution_kind_from_string("rotation"), Error);
}

TEST_CASE("Jacobian and determinant", "[evolution]") {
  const auto id = jacobian_and_det(EvolutionMap::identity(2), 1.0, Vec2(0.3, 0.3));
  CHECK(id.jacobian.isApprox(Mat2::Identity()));
  CHECK(id.det == 1.0);

  const auto st = EvolutionMap::axis_stretch(2, Vec2(0.3, 0.1), 1.0);
  const auto jd = jacobian_and_det(st, kPi / 2, Vec2(0.1, 0.9));
  CHECK(jd.jacobian(0, 0) == Approx(1.3));
  CHECK(jd.jacobian(1, 1) == Approx(1.1));
  CHECK(jd.jacobian(0, 1) == 0.0);
  CHECK(jd.det == Approx(1.43));

  const auto neg = EvolutionMap::axis_stretch(1, Vec2(-0.3, 0.0), 1.0);
  const auto jn = jacobian_and_det(neg, 3 * kPi / 2, Vec2(0.5, 0));
  CHECK(jn.jacobian(0, 0) == Approx(1.3));
  CHECK(jn.det == Approx(1.3));
}

TEST_CASE("Jacobian matches finite differences of the forward map", "[evolution][oracle]") {
  const auto st = EvolutionMap::axis_stretch(2, Vec2(0.4, -0.25), 1.7);
  const double t = 0.8;
  const Vec2 x(0.35, 0.6);
  const double h = 1e-6;
  Mat2 fd;
  for (int k = 0; k < 2; ++k) {
    Vec2 e = Vec2::Zero();
    e[k] = h;
    fd.col(k) = (st.forward(t, x + e) - st.forward(t, x - e)) / (2 * h);
  }
  CHECK((fd - st.jacobian(t)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("velocity and divergence", "[evolution]") {
  const auto id = velocity_and_divergence(EvolutionMap::identity(2), 0.4, Vec2(0.2, 0.2));
  CHECK(id.velocity.norm() == 0.0);
  CHECK(id.divergence == 0.0);

  const auto tr = velocity_and_divergence(EvolutionMap::translation(2, Vec2(1.0, 0.0)), 5.0, Vec2(3, 1));
  CHECK(tr.velocity.isApprox(Vec2(1.0, 0.0)));
  CHECK(tr.divergence == 0.0);

  const auto st = velocity_and_divergence(EvolutionMap::axis_stretch(1, Vec2(0.3, 0.0), 1.0), 0.0, Vec2(0.5, 0));
  CHECK(st.velocity[0] == Approx(0.15));
  CHECK(st.divergence == Approx(0.3));
}

TEST_CASE("velocity is the time derivative of the trajectory", "[evolution][oracle]") {
  // w(t, Phi_t x) = d/dt Phi_t x, checked by a central difference along a trajectory.
  const auto st = EvolutionMap::axis_stretch(2, Vec2(0.3, 0.6), 2.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double t = 0.1 + 3 * u(rng);
    const Vec2 x(u(rng), u(rng));
    const double h = 1e-5;
    const Vec2 fd = (st.forward(t + h, x) - st.forward(t - h, x)) / (2 * h);
    CHECK((fd - st.velocity(t, st.forward(t, x))).norm() < 1e-8);
  }
}

TEST_CASE("Jacobi residual", "[evolution][oracle]") {
  CHECK(jacobi_residual(EvolutionMap::identity(1), 2.0, Vec2(0.4, 0), 1e-2) == 0.0);

  const auto st = EvolutionMap::axis_stretch(1, Vec2(0.3, 0.0), 1.0);
  const double r1 = jacobi_residual(st, 1.0, Vec2(0.5, 0), 1e-3);
  CHECK(r1 <= 1e-5);

  // Independent oracle: J(t) = 1 + a sin t, so the central difference of J has
  // leading error a cos(t) h^2 / 6 and div w J = a cos t.
  const double h = 1e-2;
  const double expected = 0.3 * std::cos(1.0) * h * h / 6.0;
  CHECK(jacobi_residual(st, 1.0, Vec2(0.5, 0), h) == Approx(expected).epsilon(1e-3));

  const double ratio = jacobi_residual(st, 1.0, Vec2(0.5, 0), h) / jacobi_residual(st, 1.0, Vec2(0.5, 0), h / 2);
  CHECK(ratio == Approx(4.0).epsilon(0.1));
}

TEST_CASE("surface weight", "[evolution]") {
  CHECK(surface_weight(EvolutionMap::identity(2), 0.5, Vec2(0.5, 0.5), Vec2(0, 1)) == 1.0);
  const auto st = EvolutionMap::axis_stretch(2, Vec2(0.3, 0.1), 1.0);
  CHECK(surface_weight(st, kPi / 2, Vec2(0.5, 0.5), Vec2(0, 1)) == Approx(1.1));
  CHECK(surface_weight(EvolutionMap::axis_stretch(1, Vec2(0.5, 0), 1.0), 1.0, Vec2(0.5, 0), std::nullopt) == 1.0);
  CHECK_THROWS_AS(surface_weight(st, 1.0, Vec2(0.5, 0.5), Vec2(0, 1.1)), Error);
}

TEST_CASE("bi-Lipschitz constants bracket sampled ratios", "[evolution][property]") {
  const auto st = EvolutionMap::axis_stretch(2, Vec2(0.5, -0.4), 3.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double lo = 1e300;
  double hi = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const Vec2 x(u(rng), u(rng));
    const Vec2 y(u(rng), u(rng));
    const double t = 5 * u(rng);
    const double r = (st.forward(t, x) - st.forward(t, y)).norm() / (x - y).norm();
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(lo >= st.lipschitz_lower());
  CHECK(hi <= st.lipschitz_upper());
}

TEST_CASE("manufactured source special cases", "[evolution][source]") {
  ProblemCoefficients c;
  c.beta = 0.0;
  const auto src = SourceSpec::manufactured();
  const auto id = EvolutionMap::identity(1);
  // t = 0: only g'(0) p(x) survives.
  CHECK(manufactured_source(src, c, id, 0.0, Vec2(0.3, 0)) == Approx(std::sin(kPi * 0.3)));
  // Large t: stationary limit pi^2 sin(pi x).
  CHECK(manufactured_source(src, c, id, 40.0, Vec2(0.3, 0)) == Approx(kPi * kPi * std::sin(kPi * 0.3)));
}

TEST_CASE("manufactured source matches finite differences of u", "[evolution][source][oracle]") {
  ProblemCoefficients c;
  c.beta = 1.0;
  const auto src = SourceSpec::manufactured();
  const auto check_at = [&](const EvolutionMap& map, double t, const Vec2& y) {
    const int dim = map.dim();
    const double h = 1e-4;
    auto u = [&](double s, const Vec2& p) { return manufactured_solution(src, map, s, p); };
    const double dudt = (u(t + h, y) - u(t - h, y)) / (2 * h);
    double lap = 0.0;
    for (int k = 0; k < dim; ++k) {
      Vec2 e = Vec2::Zero();
      e[k] = h;
      lap += (u(t, y + e) - 2 * u(t, y) + u(t, y - e)) / (h * h);
    }
    // material derivative along the motion: u' = du/dt + w . grad u
    Vec2 grad = Vec2::Zero();
    for (int k = 0; k < dim; ++k) {
      Vec2 e = Vec2::Zero();
      e[k] = h;
      grad[k] = (u(t, y + e) - u(t, y - e)) / (2 * h);
    }
    const double material = dudt + map.velocity(t, y).dot(grad);
    const double strong = material - lap + (map.divergence(t) + c.beta) * u(t, y);
    CHECK(manufactured_source(src, c, map, t, y) == Approx(strong).epsilon(1e-5));
  };
  check_at(EvolutionMap::axis_stretch(1, Vec2(0.3, 0), 1.0), kPi / 2, Vec2(0.65, 0));
  check_at(EvolutionMap::translation(2, Vec2(0.5, 0.25)), 0.7, Vec2(0.8, 0.4));
  check_at(EvolutionMap::axis_stretch(2, Vec2(0.3, 0.2), 1.0), 1.3, Vec2(0.5, 0.45));
}

TEST_CASE("well-posedness margin", "[evolution][coefficients]") {
  ProblemCoefficients c;
  c.beta = 0.0;
  const auto st = EvolutionMap::axis_stretch(1, Vec2(0.6, 0), 2.0);
  // div w = a w cos(w t) / (1 + a sin(w t)) becomes negative, so beta = 0 is rejected.
  CHECK_THROWS_AS(well_posedness_margin(c, st, TimeGrid(3.0, 32)), Error);
  c.beta = 5.0;
  CHECK(well_posedness_margin(c, st, TimeGrid(3.0, 32)) > 0.0);
  c.alpha.c0 = 0.5;
  c.alpha.c1 = 0.6;
  CHECK_THROWS_AS(well_posedness_margin(c, st, TimeGrid(3.0, 32)), Error);
}
