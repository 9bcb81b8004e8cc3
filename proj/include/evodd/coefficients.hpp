#pragma once

#include "evodd/evolution.hpp"
#include "evodd/fields.hpp"

#include <cmath>
#include <string>
#include <string_view>

namespace evodd {

/// alpha(t) = c0 + c1 sin(omega t); constant when c1 == 0.
struct Diffusivity {
  double c0 = 1.0;
  double c1 = 0.0;
  double omega = 0.0;

  double operator()(double t) const;
  double lower_bound() const noexcept { return c0 - std::abs(c1); }
  bool is_constant() const noexcept { return c1 == 0.0; }
};

struct ProblemCoefficients {
  Diffusivity alpha;
  double beta = 1.0;
};

/// min over sampled t in [0,T] of (1/2 div w + beta); must be positive.
/// Throws configuration errors naming the violated well-posedness condition.
double well_posedness_margin(const ProblemCoefficients& coeffs, const EvolutionMap& map, const TimeGrid& grid);

enum class SourceKind { zero, manufactured, separable };

/// Temporal factors g(t).
enum class TemporalProfile { one, one_minus_exp };
/// Spatial factors p(x): sin(pi x) [sin(pi y)] or the constant 1.
enum class SpatialProfile { sine, one };

TemporalProfile temporal_profile_from_string(std::string_view name);
SpatialProfile spatial_profile_from_string(std::string_view name);
std::string_view to_string(TemporalProfile p) noexcept;
std::string_view to_string(SpatialProfile p) noexcept;

struct SourceSpec {
  SourceKind kind = SourceKind::zero;
  double amplitude = 1.0;
  TemporalProfile temporal = TemporalProfile::one_minus_exp;
  SpatialProfile spatial = SpatialProfile::sine;

  static SourceSpec zero() { return {}; }
  static SourceSpec manufactured(double amplitude = 1.0) {
    SourceSpec s;
    s.kind = SourceKind::manufactured;
    s.amplitude = amplitude;
    return s;
  }
  static SourceSpec separable(TemporalProfile g, SpatialProfile p, double amplitude = 1.0) {
    SourceSpec s;
    s.kind = SourceKind::separable;
    s.temporal = g;
    s.spatial = p;
    s.amplitude = amplitude;
    return s;
  }
};

double temporal_value(TemporalProfile g, double t);
double temporal_derivative(TemporalProfile g, double t);
double spatial_value(SpatialProfile p, int dim, const Vec2& x);

/// Manufactured solution u(t,y) = amplitude * (1 - e^{-t}) * P(Phi_{-t}(y)),
/// P(x) = prod_k sin(pi x_k). Vanishes on the moving outer boundary.
double manufactured_solution(const SourceSpec& source, const EvolutionMap& map, double t, const Vec2& y);

/// f = u' - div(alpha grad u) + (div w + beta) u for the manufactured u, in closed form.
/// Requires an affine map (all catalog maps) and spatially constant alpha.
double manufactured_source(const SourceSpec& source, const ProblemCoefficients& coeffs, const EvolutionMap& map,
                           double t, const Vec2& y);

/// f(t, y) at a physical point.
double evaluate_source(const SourceSpec& source, const ProblemCoefficients& coeffs, const EvolutionMap& map,
                       double t, const Vec2& y);

}  // namespace evodd
