#include "evodd/evolution.hpp"

#include "evodd/error.hpp"

#include <cmath>
#include <string>

namespace evodd {

namespace {

constexpr const char* kModule = "evolution";

void check_dim(int dim) {
  if (dim != 1 && dim != 2) {
    throw Error(ErrorKind::configuration, kModule, "dim must be 1 or 2, got " + std::to_string(dim));
  }
}

}  // namespace

std::string_view to_string(EvolutionKind kind) noexcept {
  switch (kind) {
    case EvolutionKind::identity: return "identity";
    case EvolutionKind::translation: return "translation";
    case EvolutionKind::axis_stretch: return "axis_stretch";
  }
  return "unknown";
}

EvolutionKind evolution_kind_from_string(std::string_view name) {
  if (name == "identity") return EvolutionKind::identity;
  if (name == "translation") return EvolutionKind::translation;
  if (name == "axis_stretch") return EvolutionKind::axis_stretch;
  throw Error(ErrorKind::configuration, kModule, "unknown evolution kind '" + std::string(name) + "'");
}

EvolutionMap::EvolutionMap(EvolutionKind kind, int dim, Vec2 a, double omega, Vec2 b)
    : kind_(kind), dim_(dim), a_(a), omega_(omega), b_(b) {
  check_dim(dim);
  if (dim == 1) {
    a_[1] = 0.0;
    b_[1] = 0.0;
  }
}

EvolutionMap EvolutionMap::identity(int dim) {
  return EvolutionMap(EvolutionKind::identity, dim, Vec2::Zero(), 0.0, Vec2::Zero());
}

EvolutionMap EvolutionMap::translation(int dim, Vec2 velocity) {
  if (!velocity.allFinite()) {
    throw Error(ErrorKind::configuration, kModule, "translation velocity must be finite");
  }
  return EvolutionMap(EvolutionKind::translation, dim, Vec2::Zero(), 0.0, velocity);
}

EvolutionMap EvolutionMap::axis_stretch(int dim, Vec2 amplitudes, double omega) {
  check_dim(dim);
  for (int k = 0; k < dim; ++k) {
    if (!std::isfinite(amplitudes[k]) || std::abs(amplitudes[k]) > kMaxAmplitude) {
      throw Error(ErrorKind::configuration, kModule,
                  "stretch amplitude a[" + std::to_string(k) + "] = " + std::to_string(amplitudes[k]) +
                      " violates |a_k| <= 0.9");
    }
  }
  if (!std::isfinite(omega)) {
    throw Error(ErrorKind::configuration, kModule, "angular frequency must be finite");
  }
  return EvolutionMap(EvolutionKind::axis_stretch, dim, amplitudes, omega, Vec2::Zero());
}

Vec2 EvolutionMap::stretch(double t) const {
  if (kind_ != EvolutionKind::axis_stretch) return Vec2::Ones();
  const double s = std::sin(omega_ * t);
  return Vec2(1.0 + a_[0] * s, 1.0 + a_[1] * s);
}

Vec2 EvolutionMap::forward(double t, const Vec2& x) const {
  switch (kind_) {
    case EvolutionKind::identity: return x;
    case EvolutionKind::translation: return x + t * b_;
    case EvolutionKind::axis_stretch: return x.cwiseProduct(stretch(t));
  }
  throw Error(ErrorKind::configuration, kModule, "unknown catalog kind");
}

Vec2 EvolutionMap::inverse(double t, const Vec2& y) const {
  switch (kind_) {
    case EvolutionKind::identity: return y;
    case EvolutionKind::translation: return y - t * b_;
    case EvolutionKind::axis_stretch: return y.cwiseQuotient(stretch(t));
  }
  throw Error(ErrorKind::configuration, kModule, "unknown catalog kind");
}

Mat2 EvolutionMap::jacobian(double t) const {
  return stretch(t).asDiagonal();
}

double EvolutionMap::det(double t) const {
  const Vec2 s = stretch(t);
  const double j = s[0] * s[1];
  if (!(std::abs(j) >= kPositivityFloor)) {
    throw Error(ErrorKind::geometry_degeneracy, kModule,
                "|J_t| = " + std::to_string(j) + " below positivity floor at t = " + std::to_string(t));
  }
  return j;
}

Vec2 EvolutionMap::velocity(double t, const Vec2& y) const {
  switch (kind_) {
    case EvolutionKind::identity: return Vec2::Zero();
    case EvolutionKind::translation: return b_;
    case EvolutionKind::axis_stretch: {
      const double c = omega_ * std::cos(omega_ * t);
      const Vec2 s = stretch(t);
      return Vec2(y[0] * a_[0] * c / s[0], y[1] * a_[1] * c / s[1]);
    }
  }
  return Vec2::Zero();
}

double EvolutionMap::divergence(double t) const {
  if (kind_ != EvolutionKind::axis_stretch) return 0.0;
  const double c = omega_ * std::cos(omega_ * t);
  const Vec2 s = stretch(t);
  double div = 0.0;
  for (int k = 0; k < dim_; ++k) div += a_[k] * c / s[k];
  return div;
}

double EvolutionMap::lipschitz_lower() const noexcept {
  double c = 1.0;
  for (int k = 0; k < dim_; ++k) c *= 1.0 - std::abs(a_[k]);
  return c;
}

double EvolutionMap::lipschitz_upper() const noexcept {
  double c = 1.0;
  for (int k = 0; k < dim_; ++k) c *= 1.0 + std::abs(a_[k]);
  return c;
}

Vec2 phi_forward(const EvolutionMap& map, double t, const Vec2& x) {
  if (t < 0.0) throw Error(ErrorKind::input, kModule, "phi_forward requires t >= 0");
  return map.forward(t, x);
}

Vec2 phi_inverse(const EvolutionMap& map, double t, const Vec2& y) {
  return map.inverse(t, y);
}

JacobianAndDet jacobian_and_det(const EvolutionMap& map, double t, const Vec2& /*x*/) {
  if (t < 0.0) throw Error(ErrorKind::input, kModule, "jacobian_and_det requires t >= 0");
  return {map.jacobian(t), map.det(t)};
}

VelocityAndDivergence velocity_and_divergence(const EvolutionMap& map, double t, const Vec2& y) {
  return {map.velocity(t, y), map.divergence(t)};
}

double jacobi_residual(const EvolutionMap& map, double t, const Vec2& x, double h) {
  if (!(h > 0.0) || t - h < 0.0) {
    throw Error(ErrorKind::input, kModule, "jacobi_residual requires h > 0 and t - h >= 0");
  }
  const double dj = (map.det(t + h) - map.det(t - h)) / (2.0 * h);
  const Vec2 y = map.forward(t, x);
  return std::abs(dj - velocity_and_divergence(map, t, y).divergence * map.det(t));
}

double surface_weight(const EvolutionMap& map, double t, const Vec2& /*x*/, std::optional<Vec2> tangent) {
  if (map.dim() == 1) return 1.0;
  if (!tangent) {
    throw Error(ErrorKind::input, kModule, "surface_weight in 2D needs a unit tangent");
  }
  if (std::abs(tangent->norm() - 1.0) > 1e-12) {
    throw Error(ErrorKind::input, kModule, "tangent is not a unit vector");
  }
  return (map.jacobian(t) * *tangent).norm();
}

}  // namespace evodd
