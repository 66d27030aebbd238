#pragma once

// The inner system governing the singular-shock core,
//   y1' = (5/2)(y1^(18/5)/y2^3 - 2 y1^(7/5)),
//   y2' = (5/2) y1^(13/5)/y2^2 - 4 y2 y1^(2/5),
// its homoclinic orbits to the origin, their power-law tails and the
// epsilon-scaled tail integrals that produce the deficit.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "chroma/errors.hpp"
#include "chroma/numerics.hpp"

namespace chroma {

struct InnerState {
  double y1{};
  double y2{};
};

struct OrbitSample {
  double eta{};
  double y1{};
  double y2{};
};

/// Samples ordered by increasing eta; `start` indexes the initial datum.
struct InnerOrbit {
  std::vector<OrbitSample> samples;
  std::size_t start{};
  double floor{};
};

struct AsymptoticFit {
  double c{};
  double d{};
  double p{};
  double r{};
};

namespace inner_constants {
inline const double c = std::pow(2.0 / 3.0, 2.5);
inline const double d = std::cbrt(3.0) * std::pow(2.0 / 3.0, 13.0 / 6.0);
inline constexpr double p = 2.5;
inline constexpr double r = 11.0 / 6.0;
/// Invariant parabola y2 = parabola * y1^(11/15).
inline const double parabola = std::cbrt(2.0);
}  // namespace inner_constants

inline std::array<double, 2> rhs_inner(InnerState y) {
  if (!(y.y1 > 0.0) || !(y.y2 > 0.0)) {
    throw DomainError("rhs_inner: y1 and y2 must be positive");
  }
  const double a = std::pow(y.y1, 0.4);  // y1^(2/5)
  const double y1_13_5 = y.y1 * y.y1 * y.y1 / a;
  const double y1_18_5 = y1_13_5 * y.y1;
  const double y2sq = y.y2 * y.y2;
  return {2.5 * (y1_18_5 / (y2sq * y.y2) - 2.0 * y.y1 * a),
          2.5 * y1_13_5 / y2sq - 4.0 * y.y2 * a};
}

/// Normal component of the field on y2 = 2^(1/3) y1^(11/15), relative to |f|.
inline double parabola_normal_residual(double y1) {
  const double y2 = inner_constants::parabola * std::pow(y1, 11.0 / 15.0);
  const auto f = rhs_inner({y1, y2});
  const double slope = (11.0 / 15.0) * y2 / y1;
  return (f[1] - slope * f[0]) / std::hypot(f[0], slope * f[0], f[1]);
}

struct InnerOptions {
  double floor{1e-8};
  double box{1e6};
  numerics::OdeOptions ode{};
  double eta_max{1e12};
};

namespace detail {

/// d(log y_i)/d eta; the tail lives far below any absolute tolerance on y,
/// so the orbit is advanced in z_i = log y_i.
inline std::array<double, 2> rhs_inner_log(double z1, double z2) {
  const double y1 = std::exp(z1);
  const double y2 = std::exp(z2);
  const double a = std::pow(y1, 0.4);
  const double q = y1 * y1 * y1 / (a * y2 * y2 * y2);  // y1^(13/5) / y2^3
  return {2.5 * (q - 2.0 * a), 2.5 * q - 4.0 * a};
}

inline std::vector<OrbitSample> integrate_leg(InnerState y0, double dir, const InnerOptions& opt) {
  std::vector<OrbitSample> out;
  auto rhs = [](double, const std::array<double, 2>& z) { return rhs_inner_log(z[0], z[1]); };
  const double log_box = std::log(opt.box);
  // Positivity holds by construction in z; the veto guards overflow in exp.
  auto admissible = [&](const std::array<double, 2>& z) {
    return z[0] < 2.0 * log_box && z[1] < 2.0 * log_box;
  };
  bool escaped = false;
  bool landed = false;
  auto observe = [&](double t, const std::array<double, 2>& z) {
    const double y1 = std::exp(z[0]);
    const double y2 = std::exp(z[1]);
    out.push_back({t, y1, y2});
    if (std::max(y1, y2) > opt.box) {
      escaped = true;
      return false;
    }
    if (std::max(y1, y2) < opt.floor) {
      landed = true;
      return false;
    }
    return true;
  };
  const auto status = numerics::dopri5<2>(rhs, 0.0, {std::log(y0.y1), std::log(y0.y2)},
                                          dir * opt.eta_max, opt.ode, admissible, observe);
  if (escaped) {
    throw BlowUp("inner orbit left the bounding box at eta=" + std::to_string(out.back().eta));
  }
  if (!landed) {
    const char* why = status == numerics::OdeStatus::StepUnderflow ? "step-size underflow"
                      : status == numerics::OdeStatus::TooManySteps ? "step budget exhausted"
                                                                    : "eta span exhausted";
    throw BlowUp(std::string("inner orbit did not reach the origin floor (") + why + ")");
  }
  return out;
}

}  // namespace detail

/// Integrate forward and backward from y0 until max(y1, y2) < floor.
inline InnerOrbit integrate_homoclinic(InnerState y0, const InnerOptions& opt = {}) {
  if (!(y0.y1 > 0.0) || !(y0.y2 > 0.0)) {
    throw DomainError("integrate_homoclinic: initial datum must be strictly positive");
  }
  auto fwd = detail::integrate_leg(y0, 1.0, opt);
  auto bwd = detail::integrate_leg(y0, -1.0, opt);
  InnerOrbit orbit;
  orbit.floor = opt.floor;
  orbit.samples.reserve(fwd.size() + bwd.size() + 1);
  for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) orbit.samples.push_back(*it);
  orbit.start = orbit.samples.size();
  orbit.samples.push_back({0.0, y0.y1, y0.y2});
  orbit.samples.insert(orbit.samples.end(), fwd.begin(), fwd.end());
  return orbit;
}

/// Least-squares fit of log y_i against log eta over the last decade of the
/// forward tail: y1 ~ c eta^-p, y2 ~ d eta^-r.
inline AsymptoticFit fit_asymptotics(const InnerOrbit& orbit) {
  if (orbit.samples.empty() || orbit.samples.back().eta <= 0.0) {
    throw InsufficientTail("fit_asymptotics: orbit has no forward tail");
  }
  const double eta_end = orbit.samples.back().eta;
  const double eta_first = orbit.samples[std::min(orbit.start + 1, orbit.samples.size() - 1)].eta;
  if (!(eta_first > 0.0) || eta_end < 100.0 * eta_first) {
    throw InsufficientTail("fit_asymptotics: forward tail spans fewer than two decades");
  }
  std::vector<double> le, l1, l2;
  for (std::size_t i = orbit.start; i < orbit.samples.size(); ++i) {
    const auto& s = orbit.samples[i];
    if (s.eta < eta_end / 10.0) continue;
    le.push_back(std::log(s.eta));
    l1.push_back(std::log(s.y1));
    l2.push_back(std::log(s.y2));
  }
  if (le.size() < 8) throw InsufficientTail("fit_asymptotics: too few samples in the last decade");
  const auto f1 = numerics::fit_line(le, l1);
  const auto f2 = numerics::fit_line(le, l2);
  return {std::exp(f1.intercept), std::exp(f2.intercept), -f1.slope, -f2.slope};
}

struct TailScaling {
  double e1{};  // slope of log I1 against log eps, expected 6 - beta3
  double e2{};  // expected 5 - beta2/2
  std::vector<double> i1;
  std::vector<double> i2;
};

namespace detail {

/// integral over [a, inf) of f(eta) in the variable u = log eta, with the
/// power-law decay of f beyond `knee` used to choose the cut-off.
template <class F>
double log_quad(F&& f, double a, double knee) {
  using boost::math::quadrature::gauss_kronrod;
  const double ua = std::log(a);
  const double uk = std::max(std::log(knee), ua);
  auto g = [&](double u) {
    const double eta = std::exp(u);
    return f(eta) * eta;
  };
  double total = 0.0;
  double err_total = 0.0;
  // Panels of width 2 in log eta keep the integrand smooth on each.
  const double lo = ua;
  const double hi = uk + 80.0;
  double u0 = lo;
  while (u0 < hi) {
    const double u1 = std::min(u0 + 2.0, hi);
    double err = 0.0;
    const double part = gauss_kronrod<double, 31>::integrate(g, u0, u1, 10, 1e-13, &err);
    if (!std::isfinite(part)) throw QuadratureFailure("tail quadrature produced a non-finite value");
    total += part;
    err_total += err;
    u0 = u1;
  }
  if (err_total > 1e-8 * std::abs(total)) {
    throw QuadratureFailure("tail quadrature error estimate too large");
  }
  return total;
}

}  // namespace detail

/// The two tail integrals
///   I1 = eps^6 [eta0 g1(eta0) + int_{eta0}^inf g1],  g1 = eta^-11/6 / (eta^-5/3 + eps^b3)^(3/2)
///   I2 = eps^5 [eta0 g2(eta0) + int_{eta0}^inf g2],  g2 = eta^-11/3 / (eta^-8/3 + eps^b2)^(3/2)
/// obtained from the power-law tails after one integration by parts.
inline std::array<double, 2> tail_integrals(double beta2, double beta3, double eps,
                                            double eta0 = 1.0) {
  const double e3 = std::pow(eps, beta3);
  const double e2 = std::pow(eps, beta2);
  auto g1 = [&](double eta) {
    return std::pow(eta, -11.0 / 6.0) / std::pow(std::pow(eta, -5.0 / 3.0) + e3, 1.5);
  };
  auto g2 = [&](double eta) {
    return std::pow(eta, -11.0 / 3.0) / std::pow(std::pow(eta, -8.0 / 3.0) + e2, 1.5);
  };
  const double knee1 = std::pow(eps, -0.6 * beta3);
  const double knee2 = std::pow(eps, -0.375 * beta2);
  const double i1 = std::pow(eps, 6.0) * (eta0 * g1(eta0) + detail::log_quad(g1, eta0, knee1));
  const double i2 = std::pow(eps, 5.0) * (eta0 * g2(eta0) + detail::log_quad(g2, eta0, knee2));
  return {i1, i2};
}

inline TailScaling tail_scaling(double beta2, double beta3, const std::vector<double>& eps_grid) {
  if (eps_grid.size() < 2) throw DomainError("tail_scaling: need at least two eps values");
  const auto [mn, mx] = std::minmax_element(eps_grid.begin(), eps_grid.end());
  if (!(*mn > 0.0) || *mx / *mn < 100.0 * (1.0 - 1e-12)) {
    throw DomainError("tail_scaling: eps grid must be positive and span two decades");
  }
  TailScaling out;
  std::vector<double> le, l1, l2;
  for (double eps : eps_grid) {
    const auto [i1, i2] = tail_integrals(beta2, beta3, eps);
    out.i1.push_back(i1);
    out.i2.push_back(i2);
    le.push_back(std::log(eps));
    l1.push_back(std::log(i1));
    l2.push_back(std::log(i2));
  }
  out.e1 = numerics::fit_line(le, l1).slope;
  out.e2 = numerics::fit_line(le, l2).slope;
  return out;
}

struct DeficitOptions {
  bool extend_tail{true};
  double cauchy_rtol{5e-4};
  double beta2{10.0};
};

struct DeficitResult {
  double kappa{};
  std::vector<double> eps;
  std::vector<double> values;
};

/// kappa(eps) = eps^5 int y2^2 / (y1^(16/15) + eps^beta2)^(3/2) d eta along the orbit.
/// Hermite-corrected trapezoid on the samples, plus the forward power-law
/// tail beyond the floor when requested.
inline double deficit_at(const InnerOrbit& orbit, double eps, const DeficitOptions& opt = {}) {
  const double eb = std::pow(eps, opt.beta2);
  const double e5 = std::pow(eps, 5.0);
  auto f = [&](const OrbitSample& s) {
    return s.y2 * s.y2 / std::pow(std::pow(s.y1, 16.0 / 15.0) + eb, 1.5);
  };
  auto fprime = [&](const OrbitSample& s) {
    const auto dy = rhs_inner({s.y1, s.y2});
    const double q = std::pow(s.y1, 16.0 / 15.0) + eb;
    const double dq = (16.0 / 15.0) * std::pow(s.y1, 1.0 / 15.0) * dy[0];
    return 2.0 * s.y2 * dy[1] / std::pow(q, 1.5) - 1.5 * s.y2 * s.y2 * dq / std::pow(q, 2.5);
  };
  double total = 0.0;
  const auto& xs = orbit.samples;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double h = xs[i + 1].eta - xs[i].eta;
    const double f0 = f(xs[i]);
    const double f1 = f(xs[i + 1]);
    total += 0.5 * h * (f0 + f1) + h * h / 12.0 * (fprime(xs[i]) - fprime(xs[i + 1]));
  }
  if (opt.extend_tail) {
    const auto& end = xs.back();
    // Amplitudes matched at the last sample, exponents from the asymptotics.
    const double a1 = end.y1 * std::pow(end.eta, inner_constants::p);
    const double a2 = end.y2 * std::pow(end.eta, inner_constants::r);
    auto g = [&](double eta) {
      const double y1 = a1 * std::pow(eta, -inner_constants::p);
      const double y2 = a2 * std::pow(eta, -inner_constants::r);
      return y2 * y2 / std::pow(std::pow(y1, 16.0 / 15.0) + eb, 1.5);
    };
    const double knee = std::pow(a1, 0.4) * std::pow(eps, -0.375 * opt.beta2);
    total += detail::log_quad(g, end.eta, knee);
  }
  return e5 * total;
}

inline DeficitResult deficit_limit(const InnerOrbit& orbit, const std::vector<double>& eps_grid,
                                   const DeficitOptions& opt = {}) {
  if (eps_grid.size() < 3) throw DomainError("deficit_limit: need at least three eps values");
  DeficitResult out;
  out.eps = eps_grid;
  std::sort(out.eps.begin(), out.eps.end(), std::greater<>());
  for (double eps : out.eps) out.values.push_back(deficit_at(orbit, eps, opt));
  const std::size_t n = out.values.size();
  const double last = out.values[n - 1];
  double spread = 0.0;
  for (std::size_t i = n - 3; i < n; ++i) spread = std::max(spread, std::abs(out.values[i] - last));
  if (!(last > 0.0) || !std::isfinite(last) || spread > opt.cauchy_rtol * last) {
    throw NonConvergent("kappa(eps) fails the Cauchy test over the last three eps values (spread " +
                        std::to_string(spread) + ", last " + std::to_string(last) + ")");
  }
  out.kappa = last;
  return out;
}

}  // namespace chroma
