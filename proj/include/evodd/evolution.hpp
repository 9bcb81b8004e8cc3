#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string_view>

namespace evodd {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

enum class EvolutionKind { identity, translation, axis_stretch };

std::string_view to_string(EvolutionKind kind) noexcept;
EvolutionKind evolution_kind_from_string(std::string_view name);

/// Closed-form domain evolution Phi_t on the reference box (0,1)^dim.
///
/// Points are stored in a Vec2; for dim == 1 the second component is carried
/// along untouched (its stretch amplitude and velocity are zero), so the
/// Jacobian determinant reduces to the first diagonal entry.
///
/// Every catalog map is affine in x for fixed t:
///   translation   Phi_t(x) = x + t b
///   axis_stretch  Phi_t(x)_k = x_k (1 + a_k sin(omega t))
class EvolutionMap {
 public:
  static constexpr double kMaxAmplitude = 0.9;
  static constexpr double kPositivityFloor = 1e-10;

  static EvolutionMap identity(int dim);
  static EvolutionMap translation(int dim, Vec2 velocity);
  static EvolutionMap axis_stretch(int dim, Vec2 amplitudes, double omega);

  EvolutionKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  const Vec2& velocity() const noexcept { return b_; }
  const Vec2& amplitudes() const noexcept { return a_; }
  double omega() const noexcept { return omega_; }

  Vec2 forward(double t, const Vec2& x) const;
  Vec2 inverse(double t, const Vec2& y) const;

  /// DPhi_t; constant in x for the catalog.
  Mat2 jacobian(double t) const;
  /// J_t = det DPhi_t. Throws geometry_degeneracy if |J_t| falls below the floor.
  double det(double t) const;

  Vec2 velocity(double t, const Vec2& y) const;
  double divergence(double t) const;

  /// Analytic bi-Lipschitz constants c <= |Phi_t(x)-Phi_t(y)|/|x-y| <= C.
  double lipschitz_lower() const noexcept;
  double lipschitz_upper() const noexcept;

 private:
  EvolutionMap(EvolutionKind kind, int dim, Vec2 a, double omega, Vec2 b);

  Vec2 stretch(double t) const;

  EvolutionKind kind_;
  int dim_;
  Vec2 a_ = Vec2::Zero();
  double omega_ = 0.0;
  Vec2 b_ = Vec2::Zero();
};

Vec2 phi_forward(const EvolutionMap& map, double t, const Vec2& x);
Vec2 phi_inverse(const EvolutionMap& map, double t, const Vec2& y);

struct JacobianAndDet {
  Mat2 jacobian;
  double det;
};
JacobianAndDet jacobian_and_det(const EvolutionMap& map, double t, const Vec2& x);

struct VelocityAndDivergence {
  Vec2 velocity;
  double divergence;
};
VelocityAndDivergence velocity_and_divergence(const EvolutionMap& map, double t, const Vec2& y);

/// |(J_{t+h} - J_{t-h})/(2h) - (div w)(t, Phi_t x) J_t|: central-difference
/// check of Jacobi's formula dJ/dt = (div w o Phi_t) J.
double jacobi_residual(const EvolutionMap& map, double t, const Vec2& x, double h);

/// Length scaling of the interface measure: 1 for dim == 1, |DPhi_t tau| for dim == 2.
double surface_weight(const EvolutionMap& map, double t, const Vec2& x, std::optional<Vec2> tangent);

}  // namespace evodd
