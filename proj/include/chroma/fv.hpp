#pragma once

// First-order finite-volume solver (Lax-Friedrichs / local Lax-Friedrichs)
// for Riemann data, with measurements of front speed, spike growth and the
// Rankine-Hugoniot deficit rate of a singular shock.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "chroma/errors.hpp"
#include "chroma/model.hpp"
#include "chroma/numerics.hpp"
#include "chroma/riemann.hpp"

namespace chroma::fv {

struct Grid1D {
  double x_lo{-1.0};
  double x_hi{2.0};
  int n{1000};

  static Grid1D make(double x_lo, double x_hi, int n) {
    if (n < 16) throw DomainError("Grid1D: need at least 16 cells");
    if (!(x_hi > x_lo)) throw DomainError("Grid1D: x_hi must exceed x_lo");
    return {x_lo, x_hi, n};
  }
  double dx() const { return (x_hi - x_lo) / n; }
  double center(int i) const { return x_lo + (i + 0.5) * dx(); }
};

enum class Scheme { LxF, LLxF };

struct SimConfig {
  double cfl{0.45};
  double t_end{1.0};
  double v_floor{1e-6 * std::cbrt(2.0)};
  Scheme scheme{Scheme::LLxF};
  int n_snapshots{8};          // equally spaced in (0, t_end], plus t = 0
  double x_jump{0.0};          // initial discontinuity position
  double min_dt_factor{1e-14};  // dt below this times t_end is a collapse

  void validate() const {
    if (!(cfl > 0.0 && cfl <= 0.5)) throw DomainError("SimConfig: cfl must lie in (0, 0.5]");
    if (!(t_end > 0.0)) throw DomainError("SimConfig: t_end must be positive");
    if (!(v_floor > 0.0)) throw DomainError("SimConfig: v_floor must be positive");
    if (n_snapshots < 1) throw DomainError("SimConfig: need at least one snapshot");
  }
};

struct Snapshot {
  double t{};
  std::vector<State> cells;
  /// Total mass of (v, y) and the time-integrated net boundary inflow since t = 0.
  std::array<double, 2> mass{};
  std::array<double, 2> inflow{};
};

struct SimResult {
  Grid1D grid;
  SimConfig config;
  std::vector<Snapshot> snapshots;
  long steps{};
  /// Largest per-step relative conservation defect over the run.
  double max_conservation_defect{};
};

namespace detail {

inline Vec2 clipped_flux(State u, double v_floor) {
  const double v = std::max(u.v, v_floor);
  return {u.y / v, 1.0 / v};
}

/// Spectral radius of the Jacobian at the clipped state.
inline double max_speed(State u, double v_floor) {
  const double v = std::max(u.v, v_floor);
  const double tr = -u.y / (v * v);
  const double det = 1.0 / (v * v * v);
  const double disc = tr * tr - 4.0 * det;
  if (disc < 0.0) return std::sqrt(det);
  return 0.5 * (std::abs(tr) + std::sqrt(disc));
}

inline std::array<double, 2> masses(const std::vector<State>& c, double dx) {
  double mv = 0.0, my = 0.0;
  for (const auto& u : c) {
    mv += u.v;
    my += u.y;
  }
  return {mv * dx, my * dx};
}

}  // namespace detail

inline SimResult simulate(State left, State right, const Grid1D& grid, const SimConfig& cfg) {
  cfg.validate();
  if (grid.n < 16) throw DomainError("Grid1D: need at least 16 cells");
  for (State u : {left, right}) {
    require_nonvacuum(u, kVacuumFloorFactor);
    if (hyperbolicity(u) == Hyperbolicity::Elliptic) {
      throw DomainError("simulate: Riemann data must be hyperbolic");
    }
  }
  const int n = grid.n;
  const double dx = grid.dx();
  std::vector<State> u(n);
  for (int i = 0; i < n; ++i) u[i] = grid.center(i) < cfg.x_jump ? left : right;

  SimResult res{grid, cfg, {}, 0, 0.0};
  std::array<double, 2> inflow{0.0, 0.0};
  res.snapshots.push_back({0.0, u, detail::masses(u, dx), inflow});

  std::vector<Vec2> f(n);
  std::vector<double> a(n);
  std::vector<Vec2> flux_if(n + 1);
  double t = 0.0;
  int next = 1;
  auto snap_time = [&](int k) { return cfg.t_end * k / cfg.n_snapshots; };

  while (next <= cfg.n_snapshots) {
    double amax = 0.0;
    for (int i = 0; i < n; ++i) {
      f[i] = detail::clipped_flux(u[i], cfg.v_floor);
      a[i] = detail::max_speed(u[i], cfg.v_floor);
      amax = std::max(amax, a[i]);
    }
    if (!std::isfinite(amax)) throw CFLCollapse("simulate: non-finite wave speed");
    double dt = cfg.cfl * dx / amax;
    if (dt < cfg.min_dt_factor * cfg.t_end) {
      throw CFLCollapse("simulate: time step underflow at t=" + std::to_string(t));
    }
    const double target = snap_time(next);
    bool hit = false;
    if (t + dt >= target) {
      dt = target - t;
      hit = true;
    }
    const double lam = dt / dx;
    // Interfaces i - 1/2 for i = 0..n; ghost cells copy the boundary cells.
    for (int i = 0; i <= n; ++i) {
      const int il = std::max(i - 1, 0);
      const int ir = std::min(i, n - 1);
      const double alpha = cfg.scheme == Scheme::LLxF ? std::max(a[il], a[ir]) : 1.0 / lam;
      flux_if[i] = {0.5 * (f[il][0] + f[ir][0]) - 0.5 * alpha * (u[ir].v - u[il].v),
                    0.5 * (f[il][1] + f[ir][1]) - 0.5 * alpha * (u[ir].y - u[il].y)};
    }
    const auto before = detail::masses(u, dx);
    for (int i = 0; i < n; ++i) {
      u[i].v -= lam * (flux_if[i + 1][0] - flux_if[i][0]);
      u[i].y -= lam * (flux_if[i + 1][1] - flux_if[i][1]);
      if (!std::isfinite(u[i].v) || !std::isfinite(u[i].y)) {
        throw CFLCollapse("simulate: non-finite state at t=" + std::to_string(t));
      }
    }
    const std::array<double, 2> step_in{dt * (flux_if[0][0] - flux_if[n][0]),
                                        dt * (flux_if[0][1] - flux_if[n][1])};
    inflow[0] += step_in[0];
    inflow[1] += step_in[1];
    const auto after = detail::masses(u, dx);
    for (int c = 0; c < 2; ++c) {
      double scale = 0.0;
      for (int i = 0; i < n; ++i) scale += std::abs(c == 0 ? u[i].v : u[i].y);
      scale *= dx;
      const double defect = std::abs(after[c] - before[c] - step_in[c]) / std::max(scale, 1e-300);
      res.max_conservation_defect = std::max(res.max_conservation_defect, defect);
    }
    t = hit ? target : t + dt;
    ++res.steps;
    if (hit) {
      res.snapshots.push_back({t, u, after, inflow});
      ++next;
    }
  }
  return res;
}

/// Position of the rightmost crossing of `level` by the chosen component
/// (0 = v, 1 = y), linearly interpolated between cell centers.
inline std::optional<double> level_crossing(const Snapshot& s, const Grid1D& grid, int component,
                                            double level) {
  auto val = [&](int i) { return component == 0 ? s.cells[i].v : s.cells[i].y; };
  for (int i = grid.n - 1; i > 0; --i) {
    const double a = val(i - 1) - level;
    const double b = val(i) - level;
    if (a == 0.0) return grid.center(i - 1);
    if ((a > 0.0) != (b > 0.0)) {
      return grid.center(i - 1) + grid.dx() * a / (a - b);
    }
  }
  return std::nullopt;
}

struct FrontFit {
  double speed{};
  double offset{};
};

/// Slope of the level-crossing position against t over snapshots with t > 0.
inline FrontFit measure_front_speed(const SimResult& r, int component, double level) {
  std::vector<double> ts, xs;
  for (const auto& s : r.snapshots) {
    if (s.t <= 0.0) continue;
    if (const auto x = level_crossing(s, r.grid, component, level)) {
      ts.push_back(s.t);
      xs.push_back(*x);
    }
  }
  if (ts.size() < 3) throw NoFront("measure_front_speed: fewer than three snapshots show a front");
  const auto fit = numerics::fit_line(ts, xs);
  return {fit.slope, fit.intercept};
}

/// Default deficit window half-width in x. A first-order spike spreads like
/// sqrt(dx t), so a width fixed in cells stops containing it as dx shrinks.
inline constexpr double kDefaultDeficitHalfWidth = 0.1;

struct DeficitMeasurement {
  double k_hat{};
  std::vector<double> t;
  std::vector<double> excess;
};

namespace detail {

/// Integral of the chosen component of a snapshot over [xa, xb].
inline double window_mass(const Snapshot& s, const Grid1D& g, int component, double xa,
                          double xb) {
  const double dx = g.dx();
  const int i0 = std::max(0, static_cast<int>(std::floor((xa - g.x_lo) / dx)));
  const int i1 = std::min(g.n - 1, static_cast<int>(std::floor((xb - g.x_lo) / dx)));
  double m = 0.0;
  for (int i = i0; i <= i1; ++i) {
    const double lo = std::max(g.x_lo + i * dx, xa);
    const double hi = std::min(g.x_lo + (i + 1) * dx, xb);
    if (hi <= lo) continue;
    m += (component == 0 ? s.cells[i].v : s.cells[i].y) * (hi - lo);
  }
  return m;
}

}  // namespace detail

/// Window [x_f - h, x_f + h] co-moving with the front, where x_f is the point
/// at which the v-mass in the window equals that of the step from v_L to v_R.
/// Returns the excess y-mass over the step from y_L to y_R and its growth rate.
inline DeficitMeasurement measure_deficit_rate(const SimResult& r, const FrontFit& front, State left,
                                               State right, double half_width) {
  const auto& g = r.grid;
  if (!(half_width > 0.0)) throw DomainError("measure_deficit_rate: half-width must be positive");
  if (left.v == right.v) throw EqualV("measure_deficit_rate: v_L == v_R leaves no v front");
  DeficitMeasurement out;
  for (const auto& s : r.snapshots) {
    if (s.t <= 0.0) continue;
    const double guess = front.offset + front.speed * s.t;
    auto escaped = [&](double xf) { return xf - half_width < g.x_lo || xf + half_width > g.x_hi; };
    if (escaped(guess)) {
      throw WindowEscape("measure_deficit_rate: window leaves the domain at t=" +
                         std::to_string(s.t));
    }
    auto balance = [&](double xf) {
      return detail::window_mass(s, g, 0, xf - half_width, xf + half_width) -
             half_width * (left.v + right.v);
    };
    // The balance moves by (v_L - v_R) dx per cell shift; search a band around the guess.
    const double band = std::max(half_width, 20.0 * g.dx());
    const double lo = std::max(guess - band, g.x_lo + half_width);
    const double hi = std::min(guess + band, g.x_hi - half_width);
    const auto xf = numerics::bisect_root(balance, lo, hi, 1e-14);
    if (!xf) throw NoFront("measure_deficit_rate: no v-balanced window near the front");
    const double m = detail::window_mass(s, g, 1, *xf - half_width, *xf + half_width) -
                     half_width * (left.y + right.y);
    out.t.push_back(s.t);
    out.excess.push_back(m);
  }
  if (out.t.size() < 2) throw NoFront("measure_deficit_rate: need at least two snapshots");
  out.k_hat = numerics::fit_line(out.t, out.excess).slope;
  return out;
}

struct Peaks {
  double max_y{-std::numeric_limits<double>::infinity()};
  double min_v{std::numeric_limits<double>::infinity()};
  double max_y_minus_v{-std::numeric_limits<double>::infinity()};
  double max_v_minus_y{-std::numeric_limits<double>::infinity()};
};

inline Peaks peaks(const Snapshot& s) {
  Peaks p;
  for (const auto& u : s.cells) {
    p.max_y = std::max(p.max_y, u.y);
    p.min_v = std::min(p.min_v, u.v);
    p.max_y_minus_v = std::max(p.max_y_minus_v, u.y - u.v);
    p.max_v_minus_y = std::max(p.max_v_minus_y, u.v - u.y);
  }
  return p;
}

/// L1 distance between the final snapshot and the exact self-similar solution.
inline double l1_error(const SimResult& r, const RiemannSolution& sol) {
  const auto& s = r.snapshots.back();
  double err = 0.0;
  for (int i = 0; i < r.grid.n; ++i) {
    const double xi = (r.grid.center(i) - r.config.x_jump) / s.t;
    const State ex = evaluate(sol, xi).u;
    err += std::abs(s.cells[i].v - ex.v) + std::abs(s.cells[i].y - ex.y);
  }
  return err * r.grid.dx();
}

}  // namespace chroma::fv
