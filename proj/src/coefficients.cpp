#include "evodd/coefficients.hpp"

#include "evodd/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace evodd {

namespace {

constexpr const char* kModule = "assembly";
constexpr double kPi = std::numbers::pi;

}  // namespace

double Diffusivity::operator()(double t) const {
  return c1 == 0.0 ? c0 : c0 + c1 * std::sin(omega * t);
}

double well_posedness_margin(const ProblemCoefficients& coeffs, const EvolutionMap& map, const TimeGrid& grid) {
  if (!(coeffs.alpha.lower_bound() > 0.0)) {
    throw Error(ErrorKind::configuration, kModule, "diffusivity must satisfy alpha >= alpha_min > 0");
  }
  // Sample the grid levels and a finer uniform set so the bound does not depend on M alone.
  constexpr int kSamples = 1024;
  double margin = std::numeric_limits<double>::infinity();
  auto sample = [&](double t) { margin = std::min(margin, 0.5 * map.divergence(t) + coeffs.beta); };
  for (int m = 0; m <= grid.steps; ++m) sample(grid.time(m));
  for (int k = 0; k <= kSamples; ++k) sample(grid.T * k / kSamples);
  if (!(margin > 0.0)) {
    std::ostringstream msg;
    msg << "well-posedness margin min(1/2 div w + beta) = " << margin << " is not positive";
    throw Error(ErrorKind::configuration, kModule, msg.str());
  }
  return margin;
}

TemporalProfile temporal_profile_from_string(std::string_view name) {
  if (name == "one") return TemporalProfile::one;
  if (name == "one_minus_exp") return TemporalProfile::one_minus_exp;
  throw Error(ErrorKind::configuration, "harness", "unknown temporal profile '" + std::string(name) + "'");
}

SpatialProfile spatial_profile_from_string(std::string_view name) {
  if (name == "sin") return SpatialProfile::sine;
  if (name == "one") return SpatialProfile::one;
  throw Error(ErrorKind::configuration, "harness", "unknown spatial profile '" + std::string(name) + "'");
}

std::string_view to_string(TemporalProfile p) noexcept {
  return p == TemporalProfile::one ? "one" : "one_minus_exp";
}

std::string_view to_string(SpatialProfile p) noexcept {
  return p == SpatialProfile::one ? "one" : "sin";
}

double temporal_value(TemporalProfile g, double t) {
  return g == TemporalProfile::one ? 1.0 : -std::expm1(-t);
}

double temporal_derivative(TemporalProfile g, double t) {
  return g == TemporalProfile::one ? 0.0 : std::exp(-t);
}

double spatial_value(SpatialProfile p, int dim, const Vec2& x) {
  if (p == SpatialProfile::one) return 1.0;
  double v = std::sin(kPi * x[0]);
  if (dim == 2) v *= std::sin(kPi * x[1]);
  return v;
}

double manufactured_solution(const SourceSpec& source, const EvolutionMap& map, double t, const Vec2& y) {
  const Vec2 x = map.inverse(t, y);
  return source.amplitude * temporal_value(TemporalProfile::one_minus_exp, t) *
         spatial_value(SpatialProfile::sine, map.dim(), x);
}

double manufactured_source(const SourceSpec& source, const ProblemCoefficients& coeffs, const EvolutionMap& map,
                           double t, const Vec2& y) {
  const Vec2 x = map.inverse(t, y);
  const double p = spatial_value(SpatialProfile::sine, map.dim(), x);
  const double g = temporal_value(TemporalProfile::one_minus_exp, t);
  const double dg = temporal_derivative(TemporalProfile::one_minus_exp, t);
  // Affine pullback: d^2/dy_k^2 of P(Phi_{-t} y) = P_kk / s_k^2 with s_k the axis scaling.
  const Mat2 jac = map.jacobian(t);
  double inv_sq = 0.0;
  for (int k = 0; k < map.dim(); ++k) inv_sq += 1.0 / (jac(k, k) * jac(k, k));
  const double laplacian = -kPi * kPi * p * inv_sq * g;
  const double u = g * p;
  return source.amplitude * (dg * p - coeffs.alpha(t) * laplacian + (map.divergence(t) + coeffs.beta) * u);
}

double evaluate_source(const SourceSpec& source, const ProblemCoefficients& coeffs, const EvolutionMap& map,
                       double t, const Vec2& y) {
  switch (source.kind) {
    case SourceKind::zero: return 0.0;
    case SourceKind::manufactured: return manufactured_source(source, coeffs, map, t, y);
    case SourceKind::separable:
      return source.amplitude * temporal_value(source.temporal, t) * spatial_value(source.spatial, map.dim(), y);
  }
  return 0.0;
}

}  // namespace evodd
