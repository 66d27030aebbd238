#pragma once

// Blow-up Chart-2 coordinates around the origin of the inner system, the
// desingularised six-dimensional vector field, its corner equilibria, and
// the frozen planar systems at the two ends of a singular shock.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chroma/errors.hpp"
#include "chroma/inner_orbit.hpp"
#include "chroma/model.hpp"
#include "chroma/numerics.hpp"
#include "chroma/riemann.hpp"

namespace chroma {

/// A point (a, r, w1, w2, xi, b) of Chart 2.
struct Chart2Point {
  double a{};
  double r{};
  double w1{};
  double w2{};
  double xi{};
  double b{};

  std::array<double, 6> to_array() const { return {a, r, w1, w2, xi, b}; }
  static Chart2Point from_array(const std::array<double, 6>& x) {
    return {x[0], x[1], x[2], x[3], x[4], x[5]};
  }
};

struct RegularizationExponents {
  double beta1{1.5};
  double beta2{10.0};
  double beta3{5.5};
  double beta4{3.0};

  /// Empty when the exponents satisfy every constraint of the singular-shock case.
  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    if (!(beta1 > 1.0)) out.push_back("beta1 must exceed 1");
    if (!(beta4 > 41.0 / 15.0)) out.push_back("beta4 must exceed 41/15");
    if (!(beta3 > 5.0 && beta3 < 6.0)) out.push_back("beta3 must lie in (5, 6)");
    if (beta2 != 10.0) out.push_back("beta2 must equal 10");
    return out;
  }

  void validate() const {
    const auto v = violations();
    if (!v.empty()) throw DomainError("RegularizationExponents: " + v.front());
  }
};

/// Nonzero root a2 of a (a^(11/5) - 2) = 0; the other root is a3 = 0.
inline const double kA2 = std::pow(2.0, 5.0 / 11.0);
inline constexpr double kA3 = 0.0;

inline Chart2Point chart2_from_scaled(InnerState y, double eps, double w1, double w2, double xi) {
  if (!(y.y1 > 0.0) || !(y.y2 > 0.0)) throw DomainError("chart2_from_scaled: Y must be positive");
  if (!(eps >= 0.0)) throw DomainError("chart2_from_scaled: eps must be nonnegative");
  const double r = std::pow(y.y2, 15.0 / 11.0);
  return {r / y.y1, r, w1, w2, xi, eps / r};
}

struct ScaledPoint {
  InnerState y{};
  double eps{};
  double w1{};
  double w2{};
  double xi{};
};

inline ScaledPoint scaled_from_chart2(const Chart2Point& p) {
  if (!(p.a > 0.0) || !(p.r > 0.0)) throw DomainError("scaled_from_chart2: a and r must be positive");
  return {{p.r / p.a, std::pow(p.r, 11.0 / 15.0)}, p.b * p.r, p.w1, p.w2, p.xi};
}

namespace detail {

/// x^e for x >= 0 with 0^e = 0 for e > 0 and 0^0 = 1.
inline double npow(double x, double e) {
  if (x < 0.0) throw DomainError("rhs_chart2: fractional power of a negative coordinate");
  if (x == 0.0) {
    if (e > 0.0) return 0.0;
    if (e == 0.0) return 1.0;
    throw SingularDenominator("rhs_chart2: negative power of a vanishing coordinate");
  }
  return std::pow(x, e);
}

/// num / a, with 0 / a = 0 on the face a = 0.
inline double over_a(double num, double a) {
  if (num == 0.0) return 0.0;
  if (a == 0.0) throw SingularDenominator("rhs_chart2: division by a = 0");
  return num / a;
}

}  // namespace detail

/// Desingularised field in Chart 2 with respect to the rescaled time zeta.
/// Component order (a, r, w1, w2, xi, b).
inline std::array<double, 6> rhs_chart2(const Chart2Point& p, const RegularizationExponents& e) {
  using detail::npow;
  const double a = p.a, r = p.r, b = p.b, w1 = p.w1, w2 = p.w2, xi = p.xi;
  if (a < 0.0 || r < 0.0 || b < 0.0) {
    throw DomainError("rhs_chart2: a, r, b must be nonnegative");
  }
  const double b1 = e.beta1, b3 = e.beta3, b4 = e.beta4;

  const double F = npow(r, b3 - 1.0) * npow(r, 1.0 / 3.0) * npow(a, 2.0 / 3.0) * npow(b, b3);
  const double G = npow(r, 134.0 / 15.0) * npow(a, 16.0 / 15.0) * npow(b, 10.0);
  const double onepF = 1.0 + F;
  const double onepG = 1.0 + G;
  if (onepF == 0.0) throw SingularDenominator("rhs_chart2: 1 + F vanishes");
  if (onepG == 0.0) throw SingularDenominator("rhs_chart2: 1 + G vanishes");
  const double theta = detail::over_a(
      npow(b, b4 - 2.0) * npow(r, b4 - 2.0) * npow(r, 4.0 / 15.0) * std::pow(onepF, 1.5), a);
  const double omt = 1.0 - theta;
  if (omt == 0.0) throw SingularDenominator("rhs_chart2: 1 - Theta vanishes");
  const double den = 4.0 * F - 5.0 * G - 1.0;
  if (den == 0.0) throw SingularDenominator("rhs_chart2: 4F - 5G - 1 vanishes");

  const double F32 = std::pow(onepF, 1.5), F52 = std::pow(onepF, 2.5), F4 = std::pow(onepF, 4.0);
  const double G12 = std::pow(onepG, 0.5), G32 = std::pow(onepG, 1.5), G52 = std::pow(onepG, 2.5);
  const double a24_15 = npow(a, 24.0 / 15.0);

  const double X = F32 / omt - xi * npow(r, 39.0 / 15.0) * npow(a, 13.0 / 5.0) * npow(b, 3.0) / G32 -
                   npow(r, 26.0 / 15.0) * a * b * b * w2 +
                   npow(r, b1) * npow(r, 26.0 / 15.0) * a * npow(b, 2.0 + b1) * xi;
  const double Y =
      npow(a, 3.0 / 5.0) * F32 / (G32 * omt) -
      npow(r, 13.0 / 5.0) * a * npow(b, 3.0) * xi * omt / F32 - npow(r, 13.0 / 15.0) * b * w1 -
      detail::over_a(npow(r, 2.0 / 15.0) * npow(r, b1 - 1.0) * npow(b, b1 - 1.0), a) / omt * F32;

  // a^(24/25) here, not a^(24/15); it multiplies b^(beta4+1) r^beta4 and vanishes on r = b = 0.
  const double brace_a =
      -75.0 / 22.0 * G52 * X + 60.0 / 11.0 * a24_15 * F52 * Y -
      5.0 * npow(a, 33.0 / 15.0) * F4 / (G12 * omt) +
      2.5 * xi * npow(r, 39.0 / 15.0) * npow(a, 39.0 / 15.0) * npow(b, 3.0) * onepF * onepG +
      2.5 * F52 * G52 -
      5.0 * npow(b, b4 + 1.0) * npow(r, 13.0 / 15.0) * npow(r, b4) * npow(a, 24.0 / 25.0) * xi * F52 *
          onepG +
      5.0 * b * w1 * npow(r, 13.0 / 15.0) * a24_15 * F52 * onepG -
      2.5 * w2 * npow(r, 26.0 / 15.0) * a * b * b * onepF * G52 +
      5.0 * npow(r, b1 - 1.0) * npow(r, 2.0 / 15.0) * npow(a, 3.0 / 5.0) * npow(b, b1 - 1.0) * F4 *
          onepG / omt +
      2.5 * xi * npow(r, b1 + 1.0) * npow(r, 11.0 / 15.0) * a * npow(b, 2.0 + b1) * onepF * G52;

  const double brace_rb = -2.5 * G52 * X + 4.0 * a24_15 * F52 * Y;

  std::array<double, 6> out{};
  out[0] = a / den * brace_a;
  out[1] = 15.0 * r / (11.0 * den) * brace_rb;
  out[2] = -npow(r, 16.0 / 3.0) * npow(a, 54.0 / 15.0) * npow(b, 6.0) / F32 +
           npow(a, 39.0 / 15.0) * npow(b, 4.0 + b4) * npow(r, b4) * npow(r, 54.0 / 15.0);
  out[3] = npow(a, 39.0 / 15.0) * npow(b, 4.0 + b1) * npow(r, b1) * npow(r, 54.0 / 15.0) -
           npow(r, 67.0 / 15.0) * npow(a, 21.0 / 5.0) * npow(b, 5.0) / G32;
  out[4] = npow(r, 18.0 / 5.0) * npow(a, 39.0 / 15.0) * npow(b, 4.0);
  out[5] = -15.0 * b / (11.0 * den) * brace_rb;
  return out;
}

/// a-component of the field on the invariant face r = b = 0.
inline double reduced_rhs_a(double a) { return -(5.0 / 11.0) * a * (std::pow(a, 11.0 / 5.0) - 2.0); }

struct EquilibriumReport {
  double a_value{};
  double eigen_a{};
  double eigen_r{};
  double eigen_b{};
  int zero_multiplicity{};
  std::string stability;
  std::array<std::complex<double>, 6> spectrum{};
};

/// Roots of the a-component of rhs_chart2 on r = b = 0 over [lo, hi].
inline std::vector<double> chart2_roots(const RegularizationExponents& e, double lo = 0.0,
                                        double hi = 3.0, int n = 600) {
  auto f = [&](double a) { return rhs_chart2({a, 0.0, 0.0, 0.0, 0.0, 0.0}, e)[0]; };
  std::vector<double> roots;
  double prev_a = lo;
  double prev_f = f(lo);
  if (prev_f == 0.0) roots.push_back(lo);
  for (int i = 1; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const double fx = f(x);
    if (fx == 0.0) {
      roots.push_back(x);
    } else if (prev_f != 0.0 && (fx > 0.0) != (prev_f > 0.0)) {
      if (const auto root = numerics::bisect_root(f, prev_a, x, 1e-15)) roots.push_back(*root);
    }
    prev_a = x;
    prev_f = fx;
  }
  return roots;
}

/// Finite-difference Jacobian of rhs_chart2. Coordinates that must stay
/// nonnegative (a, r, b) use second-order one-sided differences when they
/// sit on zero; all others use central differences.
inline Eigen::Matrix<double, 6, 6> chart2_jacobian(const Chart2Point& p,
                                                   const RegularizationExponents& e,
                                                   double h = 1e-6) {
  Eigen::Matrix<double, 6, 6> J;
  const auto x0 = p.to_array();
  const auto f0 = rhs_chart2(p, e);
  for (int j = 0; j < 6; ++j) {
    const bool one_sided = (j == 0 || j == 1 || j == 5) && x0[j] - h < 0.0;
    auto at = [&](double dx) {
      auto x = x0;
      x[j] += dx;
      return rhs_chart2(Chart2Point::from_array(x), e);
    };
    if (one_sided) {
      const auto f1 = at(h);
      const auto f2 = at(2.0 * h);
      for (int i = 0; i < 6; ++i) J(i, j) = (-3.0 * f0[i] + 4.0 * f1[i] - f2[i]) / (2.0 * h);
    } else {
      const auto fp = at(h);
      const auto fm = at(-h);
      for (int i = 0; i < 6; ++i) J(i, j) = (fp[i] - fm[i]) / (2.0 * h);
    }
  }
  return J;
}

inline EquilibriumReport equilibrium_report(double a_j, const RegularizationExponents& e,
                                            double w1 = 0.0, double w2 = 0.0, double xi = 0.0) {
  const Chart2Point p{a_j, 0.0, w1, w2, xi, 0.0};
  const auto J = chart2_jacobian(p, e);
  Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> solver(J);
  EquilibriumReport rep;
  rep.a_value = a_j;
  const auto& vals = solver.eigenvalues();
  const auto& vecs = solver.eigenvectors();
  for (int k = 0; k < 6; ++k) {
    rep.spectrum[k] = vals[k];
    if (std::abs(vals[k]) < 1e-8) {
      ++rep.zero_multiplicity;
      continue;
    }
    // Assign each transversal eigenvalue to the coordinate dominating its eigenvector.
    int dom = 0;
    for (int i = 1; i < 6; ++i)
      if (std::abs(vecs(i, k)) > std::abs(vecs(dom, k))) dom = i;
    const double lam = vals[k].real();
    if (dom == 0) rep.eigen_a = lam;
    else if (dom == 1) rep.eigen_r = lam;
    else if (dom == 5) rep.eigen_b = lam;
  }
  int unstable = 0;
  for (double l : {rep.eigen_a, rep.eigen_r, rep.eigen_b}) unstable += l > 0.0;
  rep.stability = std::to_string(unstable) + "-dimensional unstable, " +
                  std::to_string(3 - unstable) + "-dimensional stable transversal to the equilibria";
  return rep;
}

struct Chart2Equilibria {
  std::vector<double> roots;
  std::vector<EquilibriumReport> reports;
};

inline Chart2Equilibria equilibria_and_eigen(const RegularizationExponents& e, double w1 = 0.0,
                                             double w2 = 0.0, double xi = 0.0) {
  Chart2Equilibria out;
  out.roots = chart2_roots(e);
  for (double a : out.roots) out.reports.push_back(equilibrium_report(a, e, w1, w2, xi));
  return out;
}

/// Positive root of y^2 + y^(30/11) / a^2 - 1 = 0 (the blow-up sphere).
inline double sphere_y2(double a) {
  if (!(a > 0.0)) throw DomainError("sphere_y2: a must be positive");
  auto f = [&](double y) { return y * y + std::pow(y, 30.0 / 11.0) / (a * a) - 1.0; };
  const auto root = numerics::bisect_root(f, 0.0, 1.0, 1e-15);
  if (!root) throw InternalError("sphere_y2: no root in (0, 1]");
  return *root;
}

struct QPoints {
  Chart2Point q_l;
  Chart2Point q_r;
  double y2_bar{};
  Vec2 w_l{};
  Vec2 w_r{};
  SingularShockData shock{};
};

inline Vec2 frozen_w(State u, double s) {
  const auto f = flux(u);
  return {f[0] - s * u.v, f[1] - s * u.y};
}

inline QPoints q_points(State left, State right) {
  QPoints q;
  q.shock = singular_shock_data(left, right);
  if (!(q.shock.k > 0.0)) throw DomainError("q_points: deficit k must be positive");
  q.w_l = frozen_w(left, q.shock.s);
  q.w_r = frozen_w(right, q.shock.s);
  q.q_l = {kA3, 0.0, q.w_l[0], q.w_l[1], q.shock.s, 0.0};
  q.q_r = {kA2, 0.0, q.w_r[0], q.w_r[1], q.shock.s, 0.0};
  q.y2_bar = sphere_y2(kA2);
  return q;
}

struct FrozenParams {
  double s{};
  Vec2 w{};
};

inline Vec2 frozen_planar_rhs(State u, const FrozenParams& fp) {
  const auto f = flux(u);
  return {f[0] - fp.s * u.v - fp.w[0], f[1] - fp.s * u.y - fp.w[1]};
}

/// Eigenvalues of a central-difference Jacobian of the frozen planar field.
inline std::array<std::complex<double>, 2> frozen_eigenvalues(State u, const FrozenParams& fp,
                                                              double h = 1e-7) {
  Eigen::Matrix2d J;
  const double hv = h * std::max(1.0, std::abs(u.v));
  const double hy = h * std::max(1.0, std::abs(u.y));
  const auto pv = frozen_planar_rhs({u.v + hv, u.y}, fp);
  const auto mv = frozen_planar_rhs({u.v - hv, u.y}, fp);
  const auto py = frozen_planar_rhs({u.v, u.y + hy}, fp);
  const auto my = frozen_planar_rhs({u.v, u.y - hy}, fp);
  for (int i = 0; i < 2; ++i) {
    J(i, 0) = (pv[i] - mv[i]) / (2.0 * hv);
    J(i, 1) = (py[i] - my[i]) / (2.0 * hy);
  }
  Eigen::EigenSolver<Eigen::Matrix2d> solver(J);
  return {solver.eigenvalues()[0], solver.eigenvalues()[1]};
}

enum class Side { Above, Below };
enum class Flow { Inward, Outward };

struct CurveCheck {
  std::string name;
  int samples{};
  int passed{};
  std::vector<double> violations;  // v of failing samples
  double v_lo{};
  double v_hi{};
};

struct InvariantRegionReport {
  std::string proposition;
  bool window_ok{};
  double e_lo{};
  double e_hi{};
  std::vector<CurveCheck> curves;

  bool all_pass() const {
    if (!window_ok) return false;
    return std::all_of(curves.begin(), curves.end(),
                       [](const CurveCheck& c) { return c.passed == c.samples; });
  }
};

/// Which end of the singular shock a region is anchored at.
enum class RegionAnchor { Left, Right };

struct InvariantRegionSpec {
  RegionAnchor anchor_kind{RegionAnchor::Left};
  State anchor{};
  double E{};
  /// Include the negatively invariant region left of U_R (Right anchor only).
  bool include_phi3{true};
};

/// Slope window (v lambda_1, v lambda_2) at the anchor.
inline std::pair<double, double> slope_window(State anchor) {
  return {anchor.v * char_speed(anchor, 1), anchor.v * char_speed(anchor, 2)};
}

namespace detail {

template <class Phi, class DPhi>
CurveCheck sample_curve(const std::string& name, Phi phi, DPhi dphi, Side interior, Flow required,
                        double v_lo, double v_hi, int n, const FrozenParams& fp) {
  CurveCheck c;
  c.name = name;
  c.v_lo = v_lo;
  c.v_hi = v_hi;
  for (int i = 1; i <= n; ++i) {
    const double v = v_lo + (v_hi - v_lo) * i / (n + 1);
    const State u{v, phi(v)};
    const auto f = frozen_planar_rhs(u, fp);
    // Rate of change of y - phi(v) along the flow.
    const double g = f[1] - dphi(v) * f[0];
    const bool outward = interior == Side::Above ? g < 0.0 : g > 0.0;
    const bool inward = interior == Side::Above ? g > 0.0 : g < 0.0;
    const bool ok = required == Flow::Outward ? outward : inward;
    ++c.samples;
    if (ok) ++c.passed;
    else c.violations.push_back(v);
  }
  return c;
}

}  // namespace detail

/// Sampled sign check of the boundary flow of the invariant regions at the
/// two ends of a singular shock.
///
/// Left anchor (U' = F(U) - sU - W_L, negatively invariant, left of U_L):
///   phi1 = y_L - E (v - v_L), interior above, on (0, v_L);
///   phi2 = (1/s)(1/v - 1/v_L) + y_L, interior below, on (v*, v_L) with phi2(v*) = 0.
/// Right anchor (W_R): positively invariant right of U_R between
///   phi1 = y_R - E (v - v_R) (interior above) and
///   phi2 = s v (v - v_R) + y_R v / v_R (interior below), both on (v_R, 5 v_R];
/// and negatively invariant left of U_R below
///   phi3 = (1/s)(1/v - 1/v_R) + y_R, on (v0, v_R) with phi3(v0) = 0.
inline InvariantRegionReport invariant_region_check(const InvariantRegionSpec& spec, double s,
                                                    int n_samples = 200) {
  const State u = spec.anchor;
  InvariantRegionReport rep;
  const auto [lo, hi] = slope_window(u);
  rep.e_lo = lo;
  rep.e_hi = hi;
  rep.window_ok = lo < spec.E && spec.E < hi;
  const FrozenParams fp{s, frozen_w(u, s)};
  const double E = spec.E;
  auto phi1 = [&](double v) { return u.y - E * (v - u.v); };
  auto dphi1 = [&](double) { return -E; };
  auto ynull = [&](double v) { return (1.0 / v - 1.0 / u.v) / s + u.y; };
  auto dynull = [&](double v) { return -1.0 / (s * v * v); };
  // ynull vanishes where 1/v = 1/v_anchor - s y_anchor.
  const double v_zero = 1.0 / (1.0 / u.v - s * u.y);

  if (spec.anchor_kind == RegionAnchor::Left) {
    rep.proposition = "left state: negatively invariant region";
    rep.curves.push_back(detail::sample_curve("phi1", phi1, dphi1, Side::Above, Flow::Outward, 0.0,
                                              u.v, n_samples, fp));
    rep.curves.push_back(detail::sample_curve("phi2", ynull, dynull, Side::Below, Flow::Outward,
                                              std::max(v_zero, 0.0), u.v, n_samples, fp));
  } else {
    rep.proposition = "right state: positively invariant region (and negatively invariant left of U_R)";
    auto phi2 = [&](double v) { return s * v * (v - u.v) + u.y * v / u.v; };
    auto dphi2 = [&](double v) { return s * (2.0 * v - u.v) + u.y / u.v; };
    rep.curves.push_back(detail::sample_curve("phi1", phi1, dphi1, Side::Above, Flow::Inward, u.v,
                                              5.0 * u.v, n_samples, fp));
    rep.curves.push_back(detail::sample_curve("phi2", phi2, dphi2, Side::Below, Flow::Inward, u.v,
                                              5.0 * u.v, n_samples, fp));
    if (spec.include_phi3) {
      rep.curves.push_back(detail::sample_curve("phi3", ynull, dynull, Side::Below, Flow::Outward,
                                                std::max(v_zero, 0.0), u.v, n_samples, fp));
    }
  }
  return rep;
}

}  // namespace chroma
