#include <cmath>
#include <random>

#include "catch_amalgamated.hpp"
#include "chroma/inner_orbit.hpp"
#include "oracles.hpp"

using namespace chroma;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const InnerOrbit& reference_orbit() {
  static const InnerOrbit orbit = integrate_homoclinic({1.0, 1.0});
  return orbit;
}

/// Classical RK4 on the oracle field, used to re-derive orbit segments.
InnerState rk4(InnerState y, double h, int steps) {
  const double dt = h / steps;
  auto f = [](InnerState s) {
    const auto [a, b] = oracle::inner_field(s.y1, s.y2);
    return InnerState{a, b};
  };
  for (int i = 0; i < steps; ++i) {
    const auto k1 = f(y);
    const auto k2 = f({y.y1 + 0.5 * dt * k1.y1, y.y2 + 0.5 * dt * k1.y2});
    const auto k3 = f({y.y1 + 0.5 * dt * k2.y1, y.y2 + 0.5 * dt * k2.y2});
    const auto k4 = f({y.y1 + dt * k3.y1, y.y2 + dt * k3.y2});
    y.y1 += dt / 6.0 * (k1.y1 + 2.0 * k2.y1 + 2.0 * k3.y1 + k4.y1);
    y.y2 += dt / 6.0 * (k1.y2 + 2.0 * k2.y2 + 2.0 * k3.y2 + k4.y2);
  }
  return y;
}

}  // namespace

TEST_CASE("field matches its definition") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(0.01, 3.0);
  for (int i = 0; i < 500; ++i) {
    const double y1 = d(rng), y2 = d(rng);
    const auto f = rhs_inner({y1, y2});
    const auto [g1, g2] = oracle::inner_field(y1, y2);
    CHECK_THAT(f[0], WithinAbs(g1, 1e-10 * (1.0 + std::abs(g1))));
    CHECK_THAT(f[1], WithinAbs(g2, 1e-10 * (1.0 + std::abs(g2))));
  }
  CHECK_THROWS_AS(rhs_inner({0.0, 1.0}), DomainError);
}

TEST_CASE("parabola invariance at 200 points") {
  for (int i = 0; i < 200; ++i) {
    const double y1 = std::pow(10.0, -6.0 + 7.0 * i / 199.0);
    CHECK(std::abs(parabola_normal_residual(y1)) <= 1e-10);
    // Closed-form tangency: y2' / y1' equals the parabola slope (11/15) y2 / y1.
    const double y2 = std::cbrt(2.0) * std::pow(y1, 11.0 / 15.0);
    const auto [f1, f2] = oracle::inner_field(y1, y2);
    CHECK_THAT(f2, WithinRel((11.0 / 15.0) * y2 / y1 * f1, 1e-10));
  }
}

TEST_CASE("once-integrated identity (y2/y1)' = y2 / y1^(3/5)") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(0.01, 3.0);
  for (int i = 0; i < 500; ++i) {
    const double y1 = d(rng), y2 = d(rng);
    const auto f = rhs_inner({y1, y2});
    const double lhs = (f[1] * y1 - y2 * f[0]) / (y1 * y1);
    // The two products cancel; compare on their scale.
    const double scale = (std::abs(f[1] * y1) + std::abs(y2 * f[0])) / (y1 * y1);
    CHECK(std::abs(lhs - y2 / std::pow(y1, 0.6)) <= 1e-12 * scale);
  }
}

TEST_CASE("homoclinic orbit from (1, 1)") {
  const auto& o = reference_orbit();
  REQUIRE(o.samples.size() > 100);
  const auto& first = o.samples.front();
  const auto& last = o.samples.back();
  CHECK(std::max(first.y1, first.y2) < o.floor * 1.0001);
  CHECK(std::max(last.y1, last.y2) < o.floor * 1.0001);
  CHECK(first.eta < 0.0);
  CHECK(last.eta > 1e3);
  CHECK_THAT(last.y2 / std::pow(last.y1, 11.0 / 15.0), WithinRel(std::cbrt(2.0), 0.01));

  const auto fit = fit_asymptotics(o);
  CHECK_THAT(fit.p, WithinAbs(2.5, 0.05));
  CHECK_THAT(fit.r, WithinAbs(11.0 / 6.0, 0.04));
  CHECK_THAT(fit.c, WithinRel(std::pow(2.0 / 3.0, 2.5), 0.05));
  CHECK_THAT(fit.d, WithinRel(std::cbrt(3.0) * std::pow(2.0 / 3.0, 13.0 / 6.0), 0.05));
}

TEST_CASE("orbit samples satisfy the ODE") {
  const auto& o = reference_orbit();
  int checked = 0;
  for (std::size_t i = 0; i + 1 < o.samples.size(); i += 7) {
    const auto& a = o.samples[i];
    const auto& b = o.samples[i + 1];
    const auto y = rk4({a.y1, a.y2}, b.eta - a.eta, 400);
    CHECK_THAT(y.y1, WithinRel(b.y1, 1e-6));
    CHECK_THAT(y.y2, WithinRel(b.y2, 1e-6));
    ++checked;
  }
  CHECK(checked > 30);
}

TEST_CASE("start on the parabola stays on it") {
  // The parabola is the boundary of the homoclinic family: forward it runs
  // into the origin, backward it escapes.
  const double y1 = 0.5;
  const InnerState y0{y1, std::cbrt(2.0) * std::pow(y1, 11.0 / 15.0)};
  const auto fwd = detail::integrate_leg(y0, 1.0, InnerOptions{});
  REQUIRE(fwd.size() > 50);
  for (const auto& s : fwd) {
    const double on = std::cbrt(2.0) * std::pow(s.y1, 11.0 / 15.0);
    CHECK(std::abs(s.y2 - on) <= 1e-8 * on);
  }
  CHECK_THROWS_AS(integrate_homoclinic(y0), BlowUp);
}

TEST_CASE("homoclinicity from random starts below the parabola") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double y1 = 0.05 + 2.0 * d(rng);
    const double y2 = std::cbrt(2.0) * std::pow(y1, 11.0 / 15.0) * (0.05 + 0.9 * d(rng));
    InnerOrbit o;
    REQUIRE_NOTHROW(o = integrate_homoclinic({y1, y2}));
    CHECK(std::max(o.samples.back().y1, o.samples.back().y2) < 1.0001 * o.floor);
    CHECK(std::max(o.samples.front().y1, o.samples.front().y2) < 1.0001 * o.floor);
  }
}

TEST_CASE("start above the parabola leaves the box") {
  CHECK_THROWS_AS(integrate_homoclinic({1.0, 1.5}), BlowUp);
  CHECK_THROWS_AS(integrate_homoclinic({-1.0, 1.0}), DomainError);
}

TEST_CASE("fit recovers an exact power law") {
  InnerOrbit o;
  o.start = 0;
  for (int i = 0; i <= 300; ++i) {
    const double eta = std::pow(10.0, 4.0 * i / 300.0);
    o.samples.push_back({eta, 0.3 * std::pow(eta, -2.5), 0.6 * std::pow(eta, -11.0 / 6.0)});
  }
  const auto fit = fit_asymptotics(o);
  CHECK_THAT(fit.p, WithinAbs(2.5, 1e-12));
  CHECK_THAT(fit.r, WithinAbs(11.0 / 6.0, 1e-12));
  CHECK_THAT(fit.c, WithinRel(0.3, 1e-11));
  CHECK_THAT(fit.d, WithinRel(0.6, 1e-11));

  InnerOrbit short_tail;
  short_tail.start = 0;
  for (int i = 0; i <= 20; ++i) short_tail.samples.push_back({1.0 + i, 1.0, 1.0});
  CHECK_THROWS_AS(fit_asymptotics(short_tail), InsufficientTail);
}

TEST_CASE("tail scaling exponents") {
  const std::vector<double> grid{1e-4, 3e-4, 1e-3, 3e-3, 1e-2};
  struct Case {
    double b2, b3;
  };
  for (const auto c : {Case{10, 5.5}, Case{10, 5.25}, Case{10, 5.75}, Case{8, 5.5}, Case{8, 5.25},
                       Case{8, 5.75}, Case{10, 6.0}}) {
    const auto t = tail_scaling(c.b2, c.b3, grid);
    CHECK_THAT(t.e1, WithinAbs(6.0 - c.b3, 0.03));
    CHECK_THAT(t.e2, WithinAbs(5.0 - c.b2 / 2.0, 0.03));
  }
  CHECK_THROWS_AS(tail_scaling(10, 5.5, {1e-3, 1e-2}), DomainError);
}

TEST_CASE("deficit limit") {
  const auto& o = reference_orbit();
  const auto k = deficit_limit(o, {1e-1, 3e-2, 1e-2, 3e-3, 1e-3});
  CHECK(k.kappa > 0.0);
  // Three significant digits, and a monotone approach.
  const auto& v = k.values;
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] >= v[i - 1] - 1e-12);
  CHECK(std::abs(v[v.size() - 1] - v[v.size() - 2]) < 5e-4 * k.kappa);
  // Independent value: eps^5 int y2^2 / (y1^(16/15) + eps^10)^(3/2) tends to 2^(-1/3).
  CHECK_THAT(k.kappa, WithinRel(std::pow(2.0, -1.0 / 3.0), 1e-3));

  DeficitOptions truncated;
  truncated.extend_tail = false;
  CHECK_THROWS_AS(deficit_limit(o, {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}, truncated), NonConvergent);

  DeficitOptions weaker;
  weaker.beta2 = 8.0;
  const double a = deficit_at(o, 1e-2, weaker), b = deficit_at(o, 1e-3, weaker);
  CHECK(b < 0.2 * a);
}
