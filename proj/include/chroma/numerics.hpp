#pragma once

// Small numerical kernels shared by the analysis modules: bracketed scalar
// root finding, an embedded Runge-Kutta pair, and least-squares line fits.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <utility>

#include "chroma/errors.hpp"

namespace chroma::numerics {

/// Bisection on [lo, hi] followed by secant polishing inside the bracket.
/// Returns nullopt if f(lo) and f(hi) do not bracket a sign change.
template <class F>
std::optional<double> bisect_root(F&& f, double lo, double hi, double xtol = 1e-12,
                                  int max_iter = 400) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!std::isfinite(flo) || !std::isfinite(fhi) || (flo > 0.0) == (fhi > 0.0)) {
    return std::nullopt;
  }
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= xtol * std::max(1.0, std::abs(mid))) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  // Secant refinement, kept only if it stays inside the final bracket.
  double x = 0.5 * (lo + hi);
  if (fhi != flo) {
    const double xs = lo - flo * (hi - lo) / (fhi - flo);
    if (xs >= lo && xs <= hi && std::abs(f(xs)) <= std::abs(f(x))) x = xs;
  }
  return x;
}

/// Grow hi geometrically from lo until f changes sign. Returns the bracket.
template <class F>
std::optional<std::pair<double, double>> expand_bracket(F&& f, double lo, double hi,
                                                        double factor = 2.0, int max_iter = 200) {
  const double flo = f(lo);
  if (!std::isfinite(flo)) return std::nullopt;
  for (int it = 0; it < max_iter; ++it) {
    const double fhi = f(hi);
    if (std::isfinite(fhi) && ((fhi > 0.0) != (flo > 0.0) || fhi == 0.0)) return std::pair{lo, hi};
    lo = hi;
    hi *= factor;
  }
  return std::nullopt;
}

struct LineFit {
  double slope{};
  double intercept{};
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) throw DomainError("fit_line: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit_line: degenerate abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

struct OdeOptions {
  double rtol{1e-10};
  double atol{1e-12};
  double initial_step{1e-3};
  double min_step{1e-300};
  long max_steps{2'000'000};
};

enum class OdeStatus { ReachedEnd, Stopped, StepUnderflow, TooManySteps };

/// Dormand-Prince 5(4) with step-size control. Integrates from t0 towards
/// t_end (either direction).
///
/// `admissible(y)` may veto a trial state (the step is then retried with a
/// smaller size); `observe(t, y)` is called after every accepted step and
/// returns false to stop the integration.
template <std::size_t N, class Rhs, class Admissible, class Observe>
OdeStatus dopri5(Rhs&& rhs, double t0, std::array<double, N> y, double t_end,
                 const OdeOptions& opt, Admissible&& admissible, Observe&& observe) {
  using Vec = std::array<double, N>;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double dir = t_end >= t0 ? 1.0 : -1.0;
  double t = t0;
  double h = dir * std::abs(opt.initial_step);
  Vec k1 = rhs(t, y);
  auto axpy = [](const Vec& base, std::initializer_list<std::pair<double, const Vec*>> terms,
                 double hh) {
    Vec out = base;
    for (const auto& [c, k] : terms)
      for (std::size_t i = 0; i < N; ++i) out[i] += hh * c * (*k)[i];
    return out;
  };
  auto finite = [](const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };

  for (long step = 0; step < opt.max_steps; ++step) {
    if (dir * (t_end - t) <= 0.0) return OdeStatus::ReachedEnd;
    if (dir * (t + h - t_end) > 0.0) h = t_end - t;
    if (std::abs(h) < opt.min_step) return OdeStatus::StepUnderflow;

    bool ok = true;
    Vec k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, y5{};
    auto stage = [&](const Vec& ys, double ts, Vec& k) {
      if (!ok) return;
      if (!finite(ys) || !admissible(ys)) {
        ok = false;
        return;
      }
      k = rhs(ts, ys);
      if (!finite(k)) ok = false;
    };
    stage(axpy(y, {{a21, &k1}}, h), t + c2 * h, k2);
    stage(axpy(y, {{a31, &k1}, {a32, &k2}}, h), t + c3 * h, k3);
    stage(axpy(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h), t + c4 * h, k4);
    stage(axpy(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h), t + c5 * h, k5);
    stage(axpy(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h), t + h, k6);
    if (ok) {
      y5 = axpy(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, h);
      stage(y5, t + h, k7);
    }
    if (!ok) {
      h *= 0.25;
      continue;
    }

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err = std::max(err, std::abs(ei) / sc);
    }
    if (err <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;  // FSAL
      if (!observe(t, y)) return OdeStatus::Stopped;
    }
    const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= err <= 1.0 ? fac : std::min(fac, 1.0);
  }
  return OdeStatus::TooManySteps;
}

}  // namespace chroma::numerics
