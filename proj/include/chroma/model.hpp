#pragma once

// Conserved-variable form of two-component chromatography:
//   v_t + (y/v)_x = 0,   y_t + (1/v)_x = 0.

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "chroma/errors.hpp"

namespace chroma {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<Vec2, 2>;

/// Relative tolerance used to decide that a state sits on y^2 = 4v
/// (and on y^2 = 16v/3 for the nonlinearity tag).
inline constexpr double kCurveRelTol = 1e-12;

/// |v| below kVacuumFloorFactor * alpha is treated as the vacuum singularity.
inline constexpr double kVacuumFloorFactor = 1e-12;

struct State {
  double v{};
  double y{};

  friend bool operator==(const State&, const State&) = default;
  friend State operator+(State a, State b) { return {a.v + b.v, a.y + b.y}; }
  friend State operator-(State a, State b) { return {a.v - b.v, a.y - b.y}; }
  friend State operator*(double s, State a) { return {s * a.v, s * a.y}; }
};

inline double norm(State a) { return std::hypot(a.v, a.y); }

/// Concentrations of the two adsorbing components.
struct PhysState {
  double u1{};
  double u2{};
};

/// Adsorption constants alpha1 < alpha2 and the derived alpha = (alpha1*alpha2)^(1/3).
struct PhysParams {
  double alpha1{1.0};
  double alpha2{2.0};
  double alpha{std::cbrt(2.0)};

  static PhysParams make(double alpha1, double alpha2) {
    if (!(alpha1 > 0.0) || !(alpha2 > alpha1) || !std::isfinite(alpha2)) {
      throw DomainError("PhysParams: require 0 < alpha1 < alpha2 (got alpha1=" +
                        std::to_string(alpha1) + ", alpha2=" + std::to_string(alpha2) + ")");
    }
    return PhysParams{alpha1, alpha2, std::cbrt(alpha1 * alpha2)};
  }

  /// Window in which the physical triangle stays strictly hyperbolic and
  /// genuinely nonlinear.
  bool strict_gn() const { return alpha2 / 3.0 < alpha1 && alpha1 < 3.0 * alpha2; }

  double degeneracy_floor() const { return kVacuumFloorFactor * alpha; }
};

inline double discriminant(State u) { return u.y * u.y - 4.0 * u.v; }

inline void require_nonvacuum(State u, double floor) {
  if (!(std::abs(u.v) >= floor) || !std::isfinite(u.y)) {
    throw DegenerateState("state (" + std::to_string(u.v) + ", " + std::to_string(u.y) +
                          ") is at the vacuum singularity v = 0");
  }
}

/// F(U) = (y/v, 1/v).
inline Vec2 flux(State u, double floor = kVacuumFloorFactor) {
  require_nonvacuum(u, floor);
  return {u.y / u.v, 1.0 / u.v};
}

inline Mat2 jacobian(State u, double floor = kVacuumFloorFactor) {
  require_nonvacuum(u, floor);
  const double v2 = u.v * u.v;
  return {{{-u.y / v2, 1.0 / u.v}, {-1.0 / v2, 0.0}}};
}

enum class Hyperbolicity { Hyperbolic, Boundary, Elliptic };
enum class Nonlinearity { GN, NotGN, OnGNCurve };

inline const char* to_string(Hyperbolicity h) {
  switch (h) {
    case Hyperbolicity::Hyperbolic: return "hyperbolic";
    case Hyperbolicity::Boundary: return "boundary";
    case Hyperbolicity::Elliptic: return "elliptic";
  }
  return "?";
}

inline const char* to_string(Nonlinearity g) {
  switch (g) {
    case Nonlinearity::GN: return "gn";
    case Nonlinearity::NotGN: return "not_gn";
    case Nonlinearity::OnGNCurve: return "on_gn_curve";
  }
  return "?";
}

inline Hyperbolicity hyperbolicity(State u) {
  const double d = discriminant(u);
  const double scale = u.y * u.y + 4.0 * std::abs(u.v);
  if (std::abs(d) <= kCurveRelTol * scale) return Hyperbolicity::Boundary;
  return d > 0.0 ? Hyperbolicity::Hyperbolic : Hyperbolicity::Elliptic;
}

struct CharField {
  int family{};
  double lambda{};
  Vec2 eigvec{};
};

/// Characteristic structure at a state. On y^2 = 4v both fields coincide;
/// in the elliptic region the fields carry NaN speeds.
struct Eigenstructure {
  Hyperbolicity kind{};
  CharField first{};
  CharField second{};

  bool elliptic() const { return kind == Hyperbolicity::Elliptic; }
};

inline Eigenstructure eigen(State u, double floor = kVacuumFloorFactor) {
  require_nonvacuum(u, floor);
  const auto kind = hyperbolicity(u);
  const double two_v2 = 2.0 * u.v * u.v;
  if (kind == Hyperbolicity::Elliptic) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    return {kind, {1, nan, {nan, nan}}, {2, nan, {nan, nan}}};
  }
  if (kind == Hyperbolicity::Boundary) {
    const CharField f{1, -u.y / two_v2, {2.0 * u.v, u.y}};
    return {kind, f, {2, f.lambda, f.eigvec}};
  }
  const double sq = std::sqrt(discriminant(u));
  return {kind,
          {1, (-u.y - sq) / two_v2, {2.0 * u.v, u.y - sq}},
          {2, (-u.y + sq) / two_v2, {2.0 * u.v, u.y + sq}}};
}

inline double char_speed(State u, int family) {
  const auto e = eigen(u);
  if (e.elliptic()) throw DomainError("characteristic speed requested at an elliptic state");
  return family == 1 ? e.first.lambda : e.second.lambda;
}

/// D(lambda_i) . r_i with r_i normalised as in eigen().
inline double gn_derivative(State u, int family) {
  require_nonvacuum(u, kVacuumFloorFactor);
  const double d = discriminant(u);
  if (d < 0.0) throw DomainError("gn_derivative: elliptic state");
  const double sq = std::sqrt(d);
  return 2.0 * (family == 1 ? u.y + sq : u.y - sq) / (u.v * u.v);
}

struct StateClass {
  Hyperbolicity region{};
  Nonlinearity gn{};
};

inline StateClass classify_state(State u) {
  const auto region = hyperbolicity(u);
  const double g = u.y * u.y - 16.0 * u.v / 3.0;
  Nonlinearity gn;
  if (std::abs(g) <= kCurveRelTol * (u.y * u.y + 16.0 * std::abs(u.v) / 3.0)) {
    gn = Nonlinearity::OnGNCurve;
  } else if (region == Hyperbolicity::Hyperbolic && g > 0.0) {
    gn = Nonlinearity::GN;
  } else {
    gn = Nonlinearity::NotGN;
  }
  return {region, gn};
}

inline State to_conserved(PhysState p, const PhysParams& params) {
  const double d = 1.0 - p.u1 + p.u2;
  if (!(d > 0.0)) throw DegenerateState("to_conserved: 1 - u1 + u2 must be positive");
  return {params.alpha / d,
          (params.alpha2 * p.u1 - params.alpha1 * p.u2 - (params.alpha1 + params.alpha2)) /
              (params.alpha * d)};
}

inline PhysState from_conserved(State u, const PhysParams& params) {
  if (!(u.v > 0.0)) throw DegenerateState("from_conserved: v must be positive");
  // d = 1 - u1 + u2 = alpha/v; the y relation is linear in (u1, u2).
  const double d = params.alpha / u.v;
  const double a1 = params.alpha1;
  const double a2 = params.alpha2;
  // a2*u1 - a1*u2 = alpha*d*y + a1 + a2  and  u1 - u2 = 1 - d
  const double rhs = params.alpha * d * u.y + a1 + a2;
  const double diff = 1.0 - d;
  const double u1 = (rhs - a1 * diff) / (a2 - a1);
  return {u1, u1 - diff};
}

/// The curvilinear triangle OAB of physically meaningful states.
/// Sides OA (u1 = 0) and OB (u2 = 0) are lines; AB lies on y^2 = 4v.
struct Triangle {
  PhysParams params;

  State O() const {
    return {params.alpha, -(params.alpha1 + params.alpha2) / params.alpha};
  }
  State A() const {
    return {params.alpha1 * params.alpha / params.alpha2, -2.0 * params.alpha1 / params.alpha};
  }
  State B() const {
    return {params.alpha2 * params.alpha / params.alpha1, -2.0 * params.alpha2 / params.alpha};
  }

  double side_OA(double v) const {
    const double a2 = params.alpha * params.alpha;
    return -params.alpha2 * v / a2 - params.alpha1 / params.alpha;
  }
  double side_OB(double v) const {
    const double a2 = params.alpha * params.alpha;
    return -params.alpha1 * v / a2 - params.alpha2 / params.alpha;
  }

  bool contains(State u, double tol = 1e-12) const {
    const double scale = 1.0 + std::abs(u.y);
    if (u.v < A().v * (1.0 - tol) || u.v > B().v * (1.0 + tol)) return false;
    if (u.y < side_OA(u.v) - tol * scale) return false;
    if (u.y < side_OB(u.v) - tol * scale) return false;
    return discriminant(u) >= -tol * (u.y * u.y + 4.0 * std::abs(u.v));
  }
};

inline bool triangle_membership(State u, const PhysParams& params) {
  return Triangle{params}.contains(u);
}

}  // namespace chroma
