#pragma once

// Closed-form wave curves through a left state U_L, shock speeds, Lax
// admissibility, special intersection points and the singular-shock
// boundary curves J5/J6.

#include <cmath>
#include <optional>
#include <string>

#include "chroma/errors.hpp"
#include "chroma/model.hpp"
#include "chroma/numerics.hpp"

namespace chroma {

enum class CurveKind { R1, R2, S1, S2, J5, J6, Parabola4v, ParabolaGN };

inline const char* to_string(CurveKind k) {
  switch (k) {
    case CurveKind::R1: return "R1";
    case CurveKind::R2: return "R2";
    case CurveKind::S1: return "S1";
    case CurveKind::S2: return "S2";
    case CurveKind::J5: return "J5";
    case CurveKind::J6: return "J6";
    case CurveKind::Parabola4v: return "parabola_4v";
    case CurveKind::ParabolaGN: return "parabola_gn";
  }
  return "?";
}

inline std::optional<CurveKind> curve_kind_from_string(const std::string& s) {
  for (auto k : {CurveKind::R1, CurveKind::R2, CurveKind::S1, CurveKind::S2, CurveKind::J5,
                 CurveKind::J6, CurveKind::Parabola4v, CurveKind::ParabolaGN}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

struct CurveId {
  CurveKind kind{};
  State base{};
};

/// Generalised Rankine-Hugoniot speed fixed by the first component:
/// (F1(U_L) - F1(U)) / (v_L - v).
inline double singular_speed(State left, State right) {
  if (left.v == right.v) throw EqualV("singular speed undefined for v_L == v_R");
  const auto fl = flux(left);
  const auto fr = flux(right);
  return (fl[0] - fr[0]) / (left.v - right.v);
}

inline void require_anchor(State u) {
  require_nonvacuum(u, kVacuumFloorFactor);
  if (!(u.v > 0.0) || !(u.y < 0.0)) {
    throw DomainError("wave-curve anchor must have v > 0 and y < 0");
  }
  if (hyperbolicity(u) == Hyperbolicity::Elliptic) {
    throw DomainError("wave-curve anchor is elliptic (y^2 < 4v)");
  }
}

/// sqrt(y^2 - 4v), clamped to zero for states within rounding of y^2 = 4v.
inline double root_disc(State u) {
  const double d = discriminant(u);
  return d > 0.0 ? std::sqrt(d) : 0.0;
}

/// A wave curve y(v) through its anchor. Parabola kinds ignore the anchor.
class WaveCurve {
 public:
  WaveCurve(CurveKind kind, State anchor) : kind_(kind), anchor_(anchor) {
    if (kind_ == CurveKind::Parabola4v || kind_ == CurveKind::ParabolaGN) return;
    require_anchor(anchor_);
    sq_ = root_disc(anchor_);
    k_ = sq_ - anchor_.y;
  }

  CurveKind kind() const { return kind_; }
  State anchor() const { return anchor_; }

  /// K_L = sqrt(y_L^2 - 4 v_L) - y_L, the constant parametrising both R-curves.
  double k_anchor() const { return k_; }

  /// Unchecked closed-form expression, valid as a formula for every v > 0.
  double closed_form(double v) const {
    const State& a = anchor_;
    switch (kind_) {
      case CurveKind::R1: {
        if (v == a.v) return a.y;
        const double m = v / a.v * k_;
        return -(4.0 * v + m * m) / (2.0 * m);
      }
      case CurveKind::R2: {
        if (v == a.v) return a.y;
        return -(4.0 * v + k_ * k_) / (2.0 * k_);
      }
      case CurveKind::S1:
        if (v == a.v) return a.y;
        return v * (a.y - sq_) / (2.0 * a.v) + (a.y + sq_) / 2.0;
      case CurveKind::S2:
        if (v == a.v) return a.y;
        return v * (a.y + sq_) / (2.0 * a.v) + (a.y - sq_) / 2.0;
      case CurveKind::J5: {
        if (v == a.v) return a.y;
        const double lam1 = (-a.y - sq_) / (2.0 * a.v * a.v);
        return a.y / a.v * v + v * (v - a.v) * lam1;
      }
      case CurveKind::J6: {
        if (v == a.v) return a.y;
        const double den = 2.0 * a.v * (2.0 * v - a.v);
        const double t = v * a.y - 4.0 * a.v * a.v / a.y;
        const double rad = t * t + 4.0 * a.v * a.v * a.v * (a.y * a.y - 4.0 * a.v) / (a.y * a.y);
        return (v * a.y * (2.0 * v - a.v) + v * v * a.y) / den +
               (v - a.v) / den * std::sqrt(rad);
      }
      case CurveKind::Parabola4v:
        return -2.0 * std::sqrt(v);
      case CurveKind::ParabolaGN:
        return -std::sqrt(16.0 * v / 3.0);
    }
    return std::nan("");
  }

  /// Residual of the defining relation at u (zero on the curve).
  double residual(State u) const {
    const State& a = anchor_;
    switch (kind_) {
      case CurveKind::R1:
        return root_disc(u) - u.y - u.v / a.v * k_;
      case CurveKind::R2:
        return root_disc(u) - u.y - k_;
      case CurveKind::S1:
      case CurveKind::S2:
        return u.y - closed_form(u.v);
      case CurveKind::J5:
        if (u.v == a.v) return u.y - a.y;
        return singular_speed(a, u) - char_speed(a, 1);
      case CurveKind::J6:
        if (u.v == a.v) return u.y - a.y;
        return singular_speed(a, u) - char_speed(u, 2);
      case CurveKind::Parabola4v:
        return u.y * u.y - 4.0 * u.v;
      case CurveKind::ParabolaGN:
        return u.y * u.y - 16.0 * u.v / 3.0;
    }
    return std::nan("");
  }

  /// y on the curve at v. Throws DomainError where the defining relation has
  /// no real solution; J6 is cross-checked against its defining equation.
  double y_at(double v) const {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("wave curve evaluated at v <= 0");
    const State& a = anchor_;
    switch (kind_) {
      case CurveKind::R1: {
        // sqrt(y^2-4v) = m + y needs m^2 >= 4v, i.e. v >= v_G.
        const double m = v / a.v * k_;
        if (m * m < 4.0 * v * (1.0 - kCurveRelTol)) {
          throw DomainError("R1 has no real point at v below the tangency with y^2=4v");
        }
        return closed_form(v);
      }
      case CurveKind::R2:
        if (k_ * k_ < 4.0 * v * (1.0 - kCurveRelTol)) {
          throw DomainError("R2 has no real point at v beyond the tangency with y^2=4v");
        }
        return closed_form(v);
      case CurveKind::J6:
        return j6_checked(v);
      default:
        return closed_form(v);
    }
  }

  bool contains(State u, double tol = 1e-8) const {
    const double r = residual(u);
    return std::isfinite(r) && std::abs(r) <= tol * (1.0 + std::abs(u.y) + std::abs(u.v));
  }

  /// Solve s_singular(U_L, (v, y)) = lambda_2(v, y) for y by bracketing.
  std::optional<double> j6_by_root(double v) const {
    const State& a = anchor_;
    if (v == a.v) return a.y;
    auto g = [&](double y) {
      const State u{v, y};
      return singular_speed(a, u) - char_speed(u, 2);
    };
    // y ranges over (-inf, -2 sqrt(v)); scan outward from the parabola.
    const double top = -2.0 * std::sqrt(v) * (1.0 + 1e-13);
    double prev_y = top;
    double prev_g = g(top);
    double step = 1e-6 * (1.0 + std::abs(top));
    for (int i = 0; i < 200; ++i) {
      const double y = top - step;
      const double gy = g(y);
      if (std::isfinite(prev_g) && std::isfinite(gy) && (gy > 0.0) != (prev_g > 0.0)) {
        return numerics::bisect_root(g, y, prev_y, 1e-15);
      }
      prev_y = y;
      prev_g = gy;
      step *= 1.5;
    }
    return std::nullopt;
  }

 private:
  double j6_checked(double v) const {
    const auto root = j6_by_root(v);
    if (!root) throw DomainError("J6 has no point at this v");
    const double formula = closed_form(v);
    if (!std::isfinite(formula) || std::abs(formula - *root) > 1e-6 * (1.0 + std::abs(*root))) {
      throw InconsistentFormula("J6 closed form disagrees with its defining relation at v=" +
                                std::to_string(v));
    }
    return formula;
  }

  CurveKind kind_;
  State anchor_;
  double sq_{};
  double k_{};
};

inline double eval_curve(const CurveId& id, double v) { return WaveCurve(id.kind, id.base).y_at(v); }

/// Shock speed s_family for the jump from U_L to the point of S_family at v.
inline double shock_speed(State left, double v, int family) {
  require_anchor(left);
  if (!(v > 0.0)) throw DomainError("shock_speed: v must be positive");
  const double sq = root_disc(left);
  const double num = family == 1 ? -left.y - sq : -left.y + sq;
  return num / (2.0 * v * left.v);
}

/// Both Rankine-Hugoniot residuals s[U] - [F(U)] for a jump left -> right.
inline Vec2 rh_residuals(State left, State right, double s) {
  const auto fl = flux(left);
  const auto fr = flux(right);
  return {s * (right.v - left.v) - (fr[0] - fl[0]), s * (right.y - left.y) - (fr[1] - fl[1])};
}

struct SpecialPoints {
  State G;  // R1 tangent to y^2 = 4v
  State H;  // R1 (= S1 line) meets OB
  State C;  // R2 meets OA
  State D;  // R2 / S2 tangent to y^2 = 4v
  State E;  // R2 meets OB
  State F;  // continuation of R1 through G meets OA
};

inline SpecialPoints special_points(State left, const PhysParams& params) {
  require_anchor(left);
  const double sq = root_disc(left);
  const double k = sq - left.y;
  const double al = params.alpha;
  const double al2 = al * al;
  const double a1 = params.alpha1;
  const double a2 = params.alpha2;
  const Triangle tri{params};

  auto checked = [](double num, double den, const char* name) {
    if (std::abs(den) <= 1e-14 * (std::abs(num) + 1.0)) {
      throw DomainError(std::string("special point ") + name + " has a vanishing denominator");
    }
    return num / den;
  };

  SpecialPoints p{};
  const double yg = -4.0 * left.v / k;
  p.G = {yg * yg / 4.0, yg};
  const double vh = checked(-4.0 * al2 * left.v * left.v + 2.0 * al * a2 * left.v * k,
                            al2 * k * k - 2.0 * a1 * left.v * k, "H");
  p.H = {vh, tri.side_OB(vh)};
  const double vc = checked((2.0 * al * a1 - al2 * sq + al2 * left.y) * k, 4.0 * al2 - 2.0 * a2 * k, "C");
  p.C = {vc, tri.side_OA(vc)};
  const double yd = left.y - sq;
  p.D = {yd * yd / 4.0, yd};
  const double ve = checked((2.0 * al * a2 - al2 * sq + al2 * left.y) * k, 4.0 * al2 - 2.0 * a1 * k, "E");
  p.E = {ve, tri.side_OB(ve)};
  const double vf = checked(-4.0 * al2 * left.v * left.v + 2.0 * al * a1 * left.v * k,
                            al2 * k * k - 2.0 * a2 * left.v * k, "F");
  p.F = {vf, tri.side_OA(vf)};
  return p;
}

/// Lax inequalities lambda_i(U_L) > s_i > lambda_i(U) for U on S_i(U_L).
inline bool lax_admissible(State left, State right, int family) {
  const WaveCurve curve(family == 1 ? CurveKind::S1 : CurveKind::S2, left);
  if (!curve.contains(right)) {
    throw NotOnCurve("lax_admissible: state is not on the shock curve through U_L");
  }
  if (right == left) return false;
  if (hyperbolicity(right) == Hyperbolicity::Elliptic) {
    throw DomainError("lax_admissible: right state is elliptic");
  }
  const double s = shock_speed(left, right.v, family);
  return char_speed(left, family) > s && s > char_speed(right, family);
}

}  // namespace chroma
