#include <cmath>
#include <random>

#include "catch_amalgamated.hpp"
#include "chroma/riemann.hpp"
#include "oracles.hpp"

using namespace chroma;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const State kUL{1.0, -3.0};
const State kUR6{8.0, -5.66};

/// Waves chain exactly through the listed states and occupy ordered speeds.
void check_structure(const RiemannSolution& sol) {
  REQUIRE(sol.states.size() == sol.waves.size() + 1);
  double last_hi = -INFINITY;
  for (std::size_t i = 0; i < sol.waves.size(); ++i) {
    const auto& w = sol.waves[i];
    CHECK(wave_left(w) == sol.states[i]);
    CHECK(wave_right(w) == sol.states[i + 1]);
    const auto [lo, hi] = wave_span(w);
    CHECK(lo <= hi);
    if (i > 0) CHECK(lo >= last_hi - 1e-12 * std::abs(last_hi));
    last_hi = hi;
  }
}

struct Forward {
  State left, mid, right;
  int region;
};

/// Forward construction from invariants: U_M = (a_L, b), U_R = (c, b).
/// Returns nullopt for data that would need a singular shock.
std::optional<Forward> forward(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.1, 4.0);
  const State l = oracle::random_hyperbolic(rng, 0.1, 4.0);
  const auto cl = oracle::invariants(l);
  const double b = std::max(d(rng), cl.minus * 1.05);
  const double c = std::min(d(rng), b * 0.95);
  const State m = oracle::from_invariants(cl.minus, b);
  const State r = oracle::from_invariants(c, b);
  if (std::abs(m.v - l.v) < 1e-3 || std::abs(r.v - m.v) < 1e-3) return std::nullopt;
  const bool s1 = m.v > l.v, s2 = r.v > m.v;
  if (s1 && s2 && oracle::rh_speed(l, m) >= oracle::rh_speed(m, r)) return std::nullopt;
  const int region = s1 && s2 ? 1 : (!s1 && !s2 ? 2 : (s2 ? 3 : 4));
  return Forward{l, m, r, region};
}

}  // namespace

TEST_CASE("trivial datum") {
  const auto sol = solve(kUL, kUL);
  CHECK(sol.region == 1);
  CHECK(sol.waves.empty());
  REQUIRE(sol.states.size() == 1);
  CHECK(sol.states[0] == kUL);
  CHECK(classify_pair(kUL, kUL).region == 1);
}

TEST_CASE("pure 2-shock datum") {
  const State ur{2.0, WaveCurve(CurveKind::S2, kUL).y_at(2.0)};
  const auto sol = solve(kUL, ur);
  CHECK(sol.region == 1);
  REQUIRE(sol.waves.size() == 1);
  const auto* s = std::get_if<Shock>(&sol.waves[0]);
  REQUIRE(s);
  CHECK(s->family == 2);
  CHECK_THAT(s->speed, WithinAbs((3.0 + std::sqrt(5.0)) / 4.0, 1e-12));
}

TEST_CASE("pure 1-shock datum") {
  const State ur{1.4, WaveCurve(CurveKind::S1, kUL).y_at(1.4)};
  const auto sol = solve(kUL, ur);
  CHECK(sol.region == 1);
  REQUIRE(sol.waves.size() == 1);
  CHECK(std::get<Shock>(sol.waves[0]).family == 1);
}

TEST_CASE("region-1 datum by composition") {
  const State um{1.5, WaveCurve(CurveKind::S1, kUL).y_at(1.5)};
  const State ur{2.5, WaveCurve(CurveKind::S2, um).y_at(2.5)};
  const auto sol = solve(kUL, ur);
  CHECK(sol.region == 1);
  REQUIRE(sol.states.size() == 3);
  CHECK_THAT(sol.states[1].v, WithinAbs(um.v, 1e-8));
  CHECK_THAT(sol.states[1].y, WithinAbs(um.y, 1e-8));
  check_structure(sol);
  for (const auto& w : sol.waves) {
    const auto& s = std::get<Shock>(w);
    CHECK(lax_admissible(s.left, s.right, s.family));
    const auto r = rh_residuals(s.left, s.right, s.speed);
    CHECK(std::abs(r[0]) <= 1e-10);
    CHECK(std::abs(r[1]) <= 1e-10);
  }
}

TEST_CASE("round trip on 500 forward-constructed data in regions 1-4") {
  std::mt19937_64 rng(2024);
  int done = 0, per_region[5] = {0, 0, 0, 0, 0};
  double worst = 0.0;
  while (done < 500) {
    const auto f = forward(rng);
    if (!f) continue;
    const auto sol = solve(f->left, f->right);
    CHECK(sol.region == f->region);
    REQUIRE(sol.states.size() == 3);
    const State m = oracle::intermediate(f->left, f->right);
    worst = std::max({worst, std::abs(sol.states[1].v - m.v), std::abs(sol.states[1].y - m.y)});
    check_structure(sol);
    // Distinct waves occupy strictly separated speeds.
    CHECK(wave_span(sol.waves[0]).second < wave_span(sol.waves[1]).first);
    ++per_region[f->region];
    ++done;
  }
  CHECK(worst <= 1e-8);
  for (int r = 1; r <= 4; ++r) CHECK(per_region[r] > 20);
}

TEST_CASE("region-5 vacuum path") {
  const State ul = oracle::from_invariants(2.5, 3.0);
  const State ur = oracle::from_invariants(1.0, 1.5);
  const auto sol = solve(ul, ur);
  REQUIRE(sol.region == 5);
  REQUIRE(sol.waves.size() == 3);
  check_structure(sol);
  CHECK(sol.states[1] == oracle::tangency_g(ul));
  CHECK_THAT(sol.states[2].v, WithinRel(oracle::tangency_d(ur).v, 1e-14));
  CHECK_THAT(sol.states[2].y, WithinRel(oracle::tangency_d(ur).y, 1e-14));
  // Speeds lambda_1(U_L) < ... < lambda_2(U_R).
  CHECK_THAT(wave_span(sol.waves.front()).first, WithinRel(char_speed(ul, 1), 1e-14));
  CHECK_THAT(wave_span(sol.waves.back()).second, WithinRel(char_speed(ur, 2), 1e-14));

  const auto& fan = std::get<ParabolaRarefaction>(sol.waves[1]);
  for (int i = 1; i < 100; ++i) {
    const double xi = fan.xi_lo + (fan.xi_hi - fan.xi_lo) * i / 100.0;
    const auto u = evaluate(sol, xi).u;
    CHECK(std::abs(discriminant(u)) <= 1e-10);
    // Characteristic form of v_t - (2/sqrt(v))_x = 0: speed v^(-3/2) = xi.
    CHECK_THAT(std::pow(u.v, -1.5), WithinRel(xi, 1e-10));
  }
  const auto p = evaluate(sol, 0.125).u;
  CHECK_THAT(p.v, WithinAbs(4.0, 1e-12));
  CHECK_THAT(p.y, WithinAbs(-4.0, 1e-12));
}

TEST_CASE("random region-5 data keep the fan on the parabola") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double a = 0.5 + 3.0 * d(rng), b = a * (1.05 + d(rng));
    const double bR = a * (0.1 + 0.85 * d(rng)), cR = bR * (0.05 + 0.9 * d(rng));
    const auto sol = solve(oracle::from_invariants(a, b), oracle::from_invariants(cR, bR));
    REQUIRE(sol.region == 5);
    check_structure(sol);
    for (const auto& w : sol.waves) {
      if (const auto* f = std::get_if<ParabolaRarefaction>(&w)) {
        CHECK(std::abs(discriminant(f->left)) <= 1e-10);
        CHECK(std::abs(discriminant(f->right)) <= 1e-10);
        CHECK_THAT(f->xi_lo, WithinRel(std::pow(f->left.v, -1.5), 1e-12));
        CHECK_THAT(f->xi_hi, WithinRel(std::pow(f->right.v, -1.5), 1e-12));
      }
    }
  }
}

TEST_CASE("singular-shock data") {
  const auto d = singular_shock_data(kUL, kUR6);
  CHECK_THAT(d.s, WithinAbs(0.3275, 1e-9));
  CHECK_THAT(d.k, WithinAbs(0.00385, 1e-9));
  CHECK(d.oc1);
  CHECK(d.oc2);
  CHECK(d.s < 0.381966);
  CHECK(d.s > 0.045693);
  CHECK_THAT(d.k, WithinAbs(oracle::deficit(kUL, kUR6), 1e-14));

  const auto e = singular_shock_data(kUL, {5.0, -4.5});
  CHECK_THAT(e.s, WithinAbs(0.525, 1e-12));
  CHECK_THAT(e.k, WithinAbs(0.0125, 1e-12));
  CHECK_FALSE(e.oc1);
  CHECK_FALSE(e.admissible());

  const State on_s1{1.7, WaveCurve(CurveKind::S1, kUL).y_at(1.7)};
  CHECK(std::abs(singular_shock_data(kUL, on_s1).k) <= 1e-12);
  CHECK_THROWS_AS(singular_shock_data(kUL, {1.0, -4.0}), EqualV);
}

TEST_CASE("region-6 example") {
  const auto c = classify_pair(kUL, kUR6);
  CHECK(c.region == 6);
  CHECK(c.warnings.empty());
  const auto sol = solve(kUL, kUR6);
  REQUIRE(sol.waves.size() == 1);
  const auto& ss = std::get<SingularShock>(sol.waves[0]);
  CHECK_THAT(ss.speed, WithinAbs(0.3275, 1e-12));
  CHECK_THAT(ss.deficit, WithinAbs(0.00385, 1e-12));

  const auto at = evaluate(sol, ss.speed);
  REQUIRE(at.delta.has_value());
  CHECK(at.delta->s == ss.speed);
  CHECK(at.delta->k == ss.deficit);
  CHECK_FALSE(evaluate(sol, 0.0).delta.has_value());
  CHECK(evaluate(sol, 0.0).u == kUL);
  CHECK(evaluate(sol, 1.0).u == kUR6);
}

TEST_CASE("singular shocks from the classifier always pass the admissibility gate") {
  std::mt19937_64 rng(31);
  int seen = 0;
  for (int i = 0; i < 4000; ++i) {
    const State l = oracle::random_hyperbolic(rng, 0.1, 4.0);
    const State r = oracle::random_hyperbolic(rng, 0.1, 6.0);
    if (l.v == r.v) continue;
    const auto c = classify_pair(l, r);
    if (c.region != 6) continue;
    ++seen;
    CHECK(c.warnings.empty());
    const auto sol = solve(l, r);
    const auto& ss = std::get<SingularShock>(sol.waves[0]);
    CHECK(ss.deficit > 0.0);
    CHECK(char_speed(r, 2) < ss.speed);
    CHECK(ss.speed < char_speed(l, 1));
  }
  CHECK(seen > 50);
}

TEST_CASE("k vanishes on the classical shock curves and changes sign across them") {
  for (double v : {1.2, 2.0, 4.0}) {
    const State r2{v, WaveCurve(CurveKind::S2, kUL).y_at(v)};
    CHECK(std::abs(singular_shock_data(kUL, r2).k) <= 1e-12);
    const double above = singular_shock_data(kUL, {v, r2.y + 1e-3}).k;
    const double below = singular_shock_data(kUL, {v, r2.y - 1e-3}).k;
    CHECK(above * below < 0.0);
  }
}

TEST_CASE("evaluate is continuous inside fans") {
  const auto sol = solve(kUL, {0.05, -2.0});
  REQUIRE(sol.region == 2);
  for (const auto& w : sol.waves) {
    const auto& r = std::get<Rarefaction>(w);
    const auto a = evaluate(sol, r.xi_lo + 1e-9 * r.xi_lo).u;
    const auto b = evaluate(sol, r.xi_hi - 1e-9 * r.xi_hi).u;
    CHECK(norm(a - r.left) <= 1e-6);
    CHECK(norm(b - r.right) <= 1e-6);
    double prev_v = r.left.v;
    for (int i = 1; i < 50; ++i) {
      const double xi = r.xi_lo + (r.xi_hi - r.xi_lo) * i / 50.0;
      const auto u = evaluate(sol, xi).u;
      CHECK_THAT(char_speed(u, r.family), WithinRel(xi, 1e-9));
      CHECK(u.v < prev_v);  // v decreases through a rarefaction
      prev_v = u.v;
    }
  }
  CHECK(evaluate(sol, -1.0).u == kUL);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(classify_pair({1.0, -1.0}, kUR6), DomainError);
  CHECK_THROWS_AS(classify_pair(kUL, {1.0, -1.0}), DomainError);
  CHECK_THROWS_AS(classify_pair({1.0, -2.0}, kUR6), DomainError);
  CHECK_THROWS_AS(classify_pair({1.0, 3.0}, kUR6), DomainError);
  // The acceptance pair sits outside the default triangle; the check is opt-in.
  CHECK_THROWS_AS(classify_pair(kUL, kUR6, PhysParams{}, true), DomainError);
}
