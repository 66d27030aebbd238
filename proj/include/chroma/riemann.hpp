#pragma once

// Riemann problem for the chromatography system: classification into
// regions 1-6 and the self-similar solution, including the vacuum-path
// construction and singular shocks carrying a Rankine-Hugoniot deficit.

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "chroma/errors.hpp"
#include "chroma/model.hpp"
#include "chroma/numerics.hpp"
#include "chroma/wave_curves.hpp"

namespace chroma {

struct Shock {
  int family{};
  double speed{};
  State left{};
  State right{};
};

struct Rarefaction {
  int family{};
  double xi_lo{};
  double xi_hi{};
  State left{};
  State right{};
};

/// Fan along y^2 = 4v with characteristic speed v^(-3/2).
struct ParabolaRarefaction {
  double xi_lo{};
  double xi_hi{};
  State left{};
  State right{};
};

struct SingularShock {
  double speed{};
  double deficit{};
  State left{};
  State right{};
};

using Wave = std::variant<Shock, Rarefaction, ParabolaRarefaction, SingularShock>;

inline State wave_left(const Wave& w) {
  return std::visit([](const auto& x) { return x.left; }, w);
}
inline State wave_right(const Wave& w) {
  return std::visit([](const auto& x) { return x.right; }, w);
}

inline const char* wave_kind(const Wave& w) {
  struct V {
    const char* operator()(const Shock&) const { return "shock"; }
    const char* operator()(const Rarefaction&) const { return "rarefaction"; }
    const char* operator()(const ParabolaRarefaction&) const { return "parabola_rarefaction"; }
    const char* operator()(const SingularShock&) const { return "singular_shock"; }
  };
  return std::visit(V{}, w);
}

/// Leftmost and rightmost speeds occupied by a wave.
inline std::pair<double, double> wave_span(const Wave& w) {
  struct V {
    std::pair<double, double> operator()(const Shock& s) const { return {s.speed, s.speed}; }
    std::pair<double, double> operator()(const Rarefaction& r) const { return {r.xi_lo, r.xi_hi}; }
    std::pair<double, double> operator()(const ParabolaRarefaction& p) const {
      return {p.xi_lo, p.xi_hi};
    }
    std::pair<double, double> operator()(const SingularShock& s) const {
      return {s.speed, s.speed};
    }
  };
  return std::visit(V{}, w);
}

struct SingularShockData {
  double s{};
  double k{};
  bool oc1{};  // s < lambda_1(U_L)
  bool oc2{};  // lambda_2(U_R) < s

  bool admissible() const { return k > 0.0 && oc1 && oc2; }
};

inline SingularShockData singular_shock_data(State left, State right) {
  if (left.v == right.v) throw EqualV("singular_shock_data: v_L == v_R");
  const auto fl = flux(left);
  const auto fr = flux(right);
  SingularShockData d;
  d.s = (fl[0] - fr[0]) / (left.v - right.v);
  d.k = fl[1] - fr[1] - d.s * (left.y - right.y);
  d.oc1 = d.s < char_speed(left, 1);
  d.oc2 = char_speed(right, 2) < d.s;
  return d;
}

struct Classification {
  int region{};
  std::vector<std::string> warnings;
};

struct RiemannSolution {
  int region{};
  std::vector<Wave> waves;
  std::vector<State> states;
  std::vector<std::string> warnings;
};

/// v at which the 1-curve through U touches y^2 = 4v.
inline double tangency_1_v(State left) {
  const double k = root_disc(left) - left.y;
  const double yg = -4.0 * left.v / k;
  return yg * yg / 4.0;
}

namespace detail {

inline void require_solver_state(State u, const char* which, bool strict) {
  require_nonvacuum(u, kVacuumFloorFactor);
  if (!(u.v > 0.0) || !(u.y < 0.0)) {
    throw DomainError(std::string(which) + " must have v > 0 and y < 0");
  }
  const auto h = hyperbolicity(u);
  if (h == Hyperbolicity::Elliptic) throw DomainError(std::string(which) + " is elliptic");
  if (strict && h == Hyperbolicity::Boundary) {
    throw DomainError(std::string(which) + " lies on y^2 = 4v (not strictly hyperbolic)");
  }
}

/// Result of the intermediate-state search along the 1-curve through U_L.
struct Intermediate {
  bool vacuum{};  // no classical intermediate: the vacuum path is needed
  State um{};
};

/// y on the 2-curve through U gives y_R at v_R exactly when U is the
/// intermediate state; the 1-curve through U_L is a straight line, so
/// S1 and R1 share one closed form.
inline Intermediate find_intermediate(State left, State right) {
  const WaveCurve one(CurveKind::S1, left);
  const double v_g = tangency_1_v(left);
  auto g = [&](double v) {
    const State um{v, one.closed_form(v)};
    return WaveCurve(CurveKind::S2, um).closed_form(right.v) - right.y;
  };
  // Along the 1-line above v_G, c_+(U_M) = v_M / a_L, and g vanishes where
  // this equals a root of c^2 + y_R c + v_R = 0. At sqrt(v_G v_R) it sits
  // between the two roots, so g >= 0 there and the admissible root is the
  // larger one. When even v_G lies past both roots there is no classical
  // intermediate state.
  const double lo = std::max(v_g, std::sqrt(v_g * right.v));
  const double glo = g(lo);
  if (glo == 0.0) return {false, {lo, one.closed_form(lo)}};
  if (glo < 0.0) return {true, {}};
  // g tends to -inf like -v_M / a_L as v_M grows.
  const auto br = numerics::expand_bracket(g, lo, 2.0 * std::max(lo, right.v));
  if (!br) throw NoIntermediate("no bracket for the intermediate state");
  const auto v = numerics::bisect_root(g, br->first, br->second, 1e-15);
  if (!v) throw NoIntermediate("bisection failed for the intermediate state");
  // Within root tolerance of an end state the datum is a single wave.
  if (std::abs(*v - left.v) <= 1e-12 * left.v) return {false, left};
  if (std::abs(*v - right.v) <= 1e-12 * right.v) return {false, right};
  return {false, {*v, one.closed_form(*v)}};
}

}  // namespace detail

inline Classification classify_pair(State left, State right, const PhysParams& params = {},
                                    bool enforce_triangle = false) {
  detail::require_solver_state(left, "U_L", true);
  detail::require_solver_state(right, "U_R", false);
  if (enforce_triangle) {
    const Triangle tri{params};
    if (!tri.contains(left)) throw DomainError("U_L lies outside the physical triangle");
    if (!tri.contains(right)) throw DomainError("U_R lies outside the physical triangle");
  }
  Classification c;
  if (left == right) {
    c.region = 1;
    return c;
  }
  const auto im = detail::find_intermediate(left, right);
  if (im.vacuum) {
    c.region = 5;
    return c;
  }
  const bool s1 = im.um.v >= left.v;
  const bool s2 = right.v >= im.um.v;
  if (s1 && s2) {
    const bool has1 = im.um.v > left.v;
    const bool has2 = right.v > im.um.v;
    if (has1 && has2 && shock_speed(left, im.um.v, 1) >= shock_speed(im.um, right.v, 2)) {
      c.region = 6;
    } else {
      c.region = 1;
    }
  } else if (s1) {
    c.region = 4;
  } else if (s2) {
    c.region = 3;
  } else {
    c.region = 2;
  }
  if (c.region == 6) {
    const auto d = singular_shock_data(left, right);
    if (!d.admissible()) {
      c.warnings.push_back(
          "region-6 datum fails the singular-shock conditions (k > 0, s < lambda_1(U_L), "
          "lambda_2(U_R) < s)");
    }
  }
  return c;
}

namespace detail {

inline Wave rarefaction(int family, State a, State b) {
  return Rarefaction{family, char_speed(a, family), char_speed(b, family), a, b};
}

inline Wave shock(int family, State a, State b) {
  const double s = family == 1 ? shock_speed(a, b.v, 1) : shock_speed(a, b.v, 2);
  return Shock{family, s, a, b};
}

/// Point where the 2-curve through U is tangent to y^2 = 4v.
inline State tangency_2(State u) {
  const double y = u.y - root_disc(u);
  return {y * y / 4.0, y};
}

}  // namespace detail

inline RiemannSolution solve(State left, State right, const PhysParams& params = {},
                             bool enforce_triangle = false) {
  const auto cls = classify_pair(left, right, params, enforce_triangle);
  RiemannSolution sol;
  sol.region = cls.region;
  sol.warnings = cls.warnings;
  sol.states.push_back(left);
  if (left == right) return sol;

  auto push = [&](Wave w) {
    sol.waves.push_back(w);
    sol.states.push_back(wave_right(w));
  };

  if (cls.region == 6) {
    const auto d = singular_shock_data(left, right);
    if (!d.admissible()) {
      throw DomainError(
          "datum lies outside regions 1-5 but admits no singular shock: " +
          std::string(d.k > 0.0 ? "" : "k <= 0; ") + (d.oc1 ? "" : "s >= lambda_1(U_L); ") +
          (d.oc2 ? "" : "lambda_2(U_R) >= s"));
    }
    push(SingularShock{d.s, d.k, left, right});
    return sol;
  }

  if (cls.region == 5) {
    const double v_g = tangency_1_v(left);
    const State ug{v_g, -2.0 * std::sqrt(v_g)};
    const State uab = detail::tangency_2(right);
    if (!(uab.v < ug.v)) throw NoIntermediate("vacuum path: U_AB does not lie below U_G");
    if (left.v > ug.v) push(detail::rarefaction(1, left, ug));
    push(ParabolaRarefaction{std::pow(ug.v, -1.5), std::pow(uab.v, -1.5), ug, uab});
    if (uab.v > right.v) push(detail::rarefaction(2, uab, right));
    return sol;
  }

  const auto im = detail::find_intermediate(left, right);
  const State um = im.um;
  if (um.v > left.v) {
    push(detail::shock(1, left, um));
  } else if (um.v < left.v) {
    push(detail::rarefaction(1, left, um));
  }
  if (right.v > um.v) {
    push(detail::shock(2, um, right));
  } else if (right.v < um.v) {
    push(detail::rarefaction(2, um, right));
  }
  // Snap the last state to U_R exactly; the root only fixes it to rounding.
  sol.states.back() = right;
  std::visit([&](auto& w) { w.right = right; }, sol.waves.back());
  return sol;
}

struct DeltaReport {
  double s{};
  double k{};
  std::string statement;
};

struct PointValue {
  State u{};
  std::optional<DeltaReport> delta;
};

namespace detail {

/// State on the family curve through `anchor` with lambda_family = xi.
inline State fan_state(int family, State anchor, State end, double xi) {
  const WaveCurve curve(family == 1 ? CurveKind::R1 : CurveKind::R2, anchor);
  auto g = [&](double v) {
    const State u{v, curve.closed_form(v)};
    const auto e = eigen(u);
    return (family == 1 ? e.first.lambda : e.second.lambda) - xi;
  };
  const double lo = std::min(anchor.v, end.v);
  const double hi = std::max(anchor.v, end.v);
  const auto v = numerics::bisect_root(g, lo, hi, 1e-14);
  if (!v) {
    // xi is at an endpoint within rounding.
    return std::abs(g(lo)) < std::abs(g(hi)) ? (lo == anchor.v ? anchor : end)
                                             : (hi == anchor.v ? anchor : end);
  }
  return {*v, curve.closed_form(*v)};
}

}  // namespace detail

/// Self-similar solution at xi = x/t. At a shock position the left limit is
/// returned; a singular shock additionally reports its delta.
inline PointValue evaluate(const RiemannSolution& sol, double xi) {
  PointValue out{sol.states.front(), std::nullopt};
  for (const auto& w : sol.waves) {
    const auto [lo, hi] = wave_span(w);
    if (const auto* ss = std::get_if<SingularShock>(&w)) {
      if (std::abs(xi - ss->speed) <= 1e-12 * std::max(1.0, std::abs(ss->speed))) {
        out.u = ss->left;
        out.delta = DeltaReport{ss->speed, ss->deficit,
                                "y contains a delta of mass k*t at x = s*t"};
        return out;
      }
    }
    if (xi <= lo) return out;
    if (xi < hi) {
      if (const auto* r = std::get_if<Rarefaction>(&w)) {
        out.u = detail::fan_state(r->family, r->left, r->right, xi);
      } else if (std::get_if<ParabolaRarefaction>(&w)) {
        const double v = std::pow(xi, -2.0 / 3.0);
        out.u = {v, -2.0 * std::sqrt(v)};
      }
      return out;
    }
    out.u = wave_right(w);
  }
  return out;
}

}  // namespace chroma
