// chroma: command-line front end for the chromatography Riemann toolkit.
//
// Exit codes: 0 success, 1 domain or usage error, 2 internal-consistency failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "chroma/errors.hpp"
#include "chroma/fv.hpp"
#include "chroma/gspt.hpp"
#include "chroma/inner_orbit.hpp"
#include "chroma/model.hpp"
#include "chroma/riemann.hpp"
#include "chroma/wave_curves.hpp"

namespace {

using nlohmann::ordered_json;
using namespace chroma;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Round to 12 significant digits; the shortest round-trip form of the result
/// is what the serializer prints, so output is stable across runs.
ordered_json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

ordered_json state_json(State u) { return ordered_json::array({num(u.v), num(u.y)}); }

State parse_pair(const std::string& s, const char* what) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw UsageError(std::string(what) + " expects 'a,b', got '" + s + "'");
  try {
    std::size_t p1 = 0, p2 = 0;
    const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
    const double x = std::stod(a, &p1);
    const double y = std::stod(b, &p2);
    if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument("trailing text");
    return {x, y};
  } catch (const std::exception&) {
    throw UsageError(std::string(what) + " expects two numbers 'a,b', got '" + s + "'");
  }
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t p = 0;
      out.push_back(std::stod(item, &p));
      if (p != item.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + " expects a comma-separated list of numbers");
    }
  }
  return out;
}

/// Flat run configuration. Defaults, then CHROMA_CONFIG, then flags.
struct Config {
  PhysParams params{};
  RegularizationExponents exps{};
  State ul{1.0, -3.0};
  State ur{8.0, -5.66};
  double tol{1e-10};
  int n{2000};
  double cfl{0.45};
  double t_end{2.0};
  std::string out;
  bool enforce_triangle{false};

  // profile / curves
  double xi_min{-1.0};
  double xi_max{2.0};
  int samples{400};
  std::string curve{"all"};
  double v_min{0.05};
  double v_max{10.0};

  // inner
  InnerState y0{1.0, 1.0};
  std::vector<double> eps{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};

  // simulate
  double x_min{-1.0};
  double x_max{2.0};
  int snapshots{10};
  int levels{1};
  std::string scheme{"llxf"};
  double window{fv::kDefaultDeficitHalfWidth};
  std::optional<double> level;
};

double get_num(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw UsageError("config key '" + key + "' must be a number");
  return v.get<double>();
}

State get_state(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return parse_pair(v.get<std::string>(), key.c_str());
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw UsageError("config key '" + key + "' must be [v, y] or \"v,y\"");
}

void load_config_file(Config& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open CHROMA_CONFIG file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw UsageError("CHROMA_CONFIG is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw UsageError("CHROMA_CONFIG must hold a flat JSON object");
  for (const auto& [k, v] : j.items()) {
    if (v.is_object()) throw UsageError("CHROMA_CONFIG must be flat; key '" + k + "' is an object");
    if (k == "alpha1") c.params.alpha1 = get_num(v, k);
    else if (k == "alpha2") c.params.alpha2 = get_num(v, k);
    else if (k == "beta1") c.exps.beta1 = get_num(v, k);
    else if (k == "beta2") c.exps.beta2 = get_num(v, k);
    else if (k == "beta3") c.exps.beta3 = get_num(v, k);
    else if (k == "beta4") c.exps.beta4 = get_num(v, k);
    else if (k == "ul") c.ul = get_state(v, k);
    else if (k == "ur") c.ur = get_state(v, k);
    else if (k == "tol") c.tol = get_num(v, k);
    else if (k == "n") c.n = static_cast<int>(get_num(v, k));
    else if (k == "cfl") c.cfl = get_num(v, k);
    else if (k == "t_end") c.t_end = get_num(v, k);
    else if (k == "out") c.out = v.get<std::string>();
    else if (k == "enforce_triangle") c.enforce_triangle = v.get<bool>();
    else if (k == "samples") c.samples = static_cast<int>(get_num(v, k));
    else if (k == "window") c.window = get_num(v, k);
    else if (k == "levels") c.levels = static_cast<int>(get_num(v, k));
    else if (k == "snapshots") c.snapshots = static_cast<int>(get_num(v, k));
    else if (k == "scheme") c.scheme = v.get<std::string>();
    else throw UsageError("unknown CHROMA_CONFIG key '" + k + "'");
  }
}

void finalize(Config& c) {
  c.params = PhysParams::make(c.params.alpha1, c.params.alpha2);
  if (!(c.tol > 0.0)) throw UsageError("--tol must be positive");
  if (c.samples < 2) throw UsageError("--samples must be at least 2");
  if (c.levels < 1 || c.levels > 6) throw UsageError("--levels must lie in [1, 6]");
  if (c.scheme != "llxf" && c.scheme != "lxf") throw UsageError("--scheme must be llxf or lxf");
}

/// Output sink: JSON goes to stdout and, with --out, to DIR/<name>.json.
struct Output {
  std::string dir;

  std::filesystem::path path(const std::string& file) const {
    std::filesystem::create_directories(dir);
    return std::filesystem::path(dir) / file;
  }

  void json(const std::string& name, const ordered_json& j) const {
    const std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!dir.empty()) std::ofstream(path(name + ".json")) << text;
  }

  /// CSV goes to DIR/<file> with --out; otherwise to stdout.
  void csv(const std::string& file, const std::string& text) const {
    if (dir.empty()) {
      std::cout << text;
    } else {
      std::ofstream(path(file)) << text;
    }
  }
};

ordered_json warnings_json(const std::vector<std::string>& w) {
  ordered_json a = ordered_json::array();
  for (const auto& s : w) a.push_back(s);
  return a;
}

// ---- subcommands ----

int cmd_classify(const Config& c, const Output& out) {
  const auto cls = classify_pair(c.ul, c.ur, c.params, c.enforce_triangle);
  ordered_json j;
  j["region"] = cls.region;
  if (cls.region == 6) {
    const auto d = singular_shock_data(c.ul, c.ur);
    j["s"] = num(d.s);
    j["k"] = num(d.k);
    j["overcompressive"] = d.oc1 && d.oc2;
    j["lambda1_left"] = num(char_speed(c.ul, 1));
    j["lambda2_right"] = num(char_speed(c.ur, 2));
  }
  j["warnings"] = warnings_json(cls.warnings);
  out.json("classify", j);
  return 0;
}

ordered_json wave_json(const Wave& w) {
  ordered_json j;
  j["kind"] = wave_kind(w);
  if (const auto* s = std::get_if<Shock>(&w)) {
    j["family"] = s->family;
    j["speed"] = num(s->speed);
  } else if (const auto* r = std::get_if<Rarefaction>(&w)) {
    j["family"] = r->family;
    j["speeds"] = ordered_json::array({num(r->xi_lo), num(r->xi_hi)});
  } else if (const auto* p = std::get_if<ParabolaRarefaction>(&w)) {
    j["speeds"] = ordered_json::array({num(p->xi_lo), num(p->xi_hi)});
  } else if (const auto* ss = std::get_if<SingularShock>(&w)) {
    j["speed"] = num(ss->speed);
    j["deficit"] = num(ss->deficit);
  }
  j["left"] = state_json(wave_left(w));
  j["right"] = state_json(wave_right(w));
  return j;
}

int cmd_solve(const Config& c, const Output& out) {
  const auto sol = solve(c.ul, c.ur, c.params, c.enforce_triangle);
  ordered_json j;
  j["region"] = sol.region;
  j["waves"] = ordered_json::array();
  for (const auto& w : sol.waves) j["waves"].push_back(wave_json(w));
  j["states"] = ordered_json::array();
  for (const auto& u : sol.states) j["states"].push_back(state_json(u));
  j["warnings"] = warnings_json(sol.warnings);
  out.json("solve", j);
  return 0;
}

int cmd_profile(const Config& c, const Output& out) {
  if (!(c.xi_max > c.xi_min)) throw UsageError("--xi-range must be increasing");
  const auto sol = solve(c.ul, c.ur, c.params, c.enforce_triangle);
  std::string csv = "xi,v,y\n";
  for (int i = 0; i < c.samples; ++i) {
    const double xi = c.xi_min + (c.xi_max - c.xi_min) * i / (c.samples - 1);
    const auto pv = evaluate(sol, xi);
    csv += fmt(xi) + "," + fmt(pv.u.v) + "," + fmt(pv.u.y) + "\n";
  }
  out.csv("profile.csv", csv);
  ordered_json j;
  j["region"] = sol.region;
  j["samples"] = c.samples;
  j["xi_range"] = ordered_json::array({num(c.xi_min), num(c.xi_max)});
  for (const auto& w : sol.waves) {
    if (const auto* ss = std::get_if<SingularShock>(&w)) {
      j["singular_shock"] = {{"s", num(ss->speed)}, {"k", num(ss->deficit)},
                             {"statement", "y contains a delta of mass k*t at x = s*t"}};
    }
  }
  // With no --out the CSV already went to stdout; the sidecar then goes to stderr.
  if (out.dir.empty()) {
    std::cerr << j.dump(2) << "\n";
  } else {
    std::ofstream(out.path("profile.json")) << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_curves(const Config& c, const Output& out) {
  if (!(c.v_max > c.v_min) || !(c.v_min > 0.0)) throw UsageError("--v-range must satisfy 0 < lo < hi");
  std::vector<CurveKind> kinds;
  if (c.curve == "all") {
    kinds = {CurveKind::R1, CurveKind::R2, CurveKind::S1, CurveKind::S2};
  } else {
    const auto k = curve_kind_from_string(c.curve);
    if (!k) throw UsageError("unknown curve '" + c.curve + "'");
    kinds = {*k};
  }
  std::string csv = "v,y,curve_id\n";
  ordered_json j;
  j["anchor"] = state_json(c.ul);
  j["curves"] = ordered_json::array();
  for (const auto kind : kinds) {
    const WaveCurve curve(kind, c.ul);
    int emitted = 0;
    for (int i = 0; i < c.samples; ++i) {
      const double v = c.v_min + (c.v_max - c.v_min) * i / (c.samples - 1);
      // Rarefaction and shock branches only exist on one side of the anchor.
      if ((kind == CurveKind::R1 || kind == CurveKind::S2) && v > c.ul.v) continue;
      if ((kind == CurveKind::R2 || kind == CurveKind::S1) && v < c.ul.v) continue;
      double y;
      try {
        y = curve.y_at(v);
      } catch (const DomainError&) {
        continue;
      }
      csv += fmt(v) + "," + fmt(y) + "," + to_string(kind) + "\n";
      ++emitted;
    }
    j["curves"].push_back({{"curve_id", to_string(kind)}, {"points", emitted}});
  }
  out.csv("curves.csv", csv);
  if (!out.dir.empty()) std::ofstream(out.path("curves.json")) << j.dump(2) << "\n";
  return 0;
}

int cmd_inner(const Config& c, const Output& out) {
  InnerOptions opt;
  opt.ode.rtol = c.tol;
  const auto orbit = integrate_homoclinic(c.y0, opt);
  const auto fit = fit_asymptotics(orbit);
  double par = 0.0;
  for (int i = 0; i < 200; ++i) {
    par = std::max(par, std::abs(parabola_normal_residual(std::pow(10.0, -6.0 + 6.0 * i / 199.0))));
  }
  ordered_json j;
  j["start"] = ordered_json::array({num(c.y0.y1), num(c.y0.y2)});
  j["samples"] = orbit.samples.size();
  j["eta_range"] = ordered_json::array({num(orbit.samples.front().eta), num(orbit.samples.back().eta)});
  j["c"] = num(fit.c);
  j["d"] = num(fit.d);
  j["p"] = num(fit.p);
  j["r"] = num(fit.r);
  j["targets"] = {{"c", num(inner_constants::c)}, {"d", num(inner_constants::d)},
                  {"p", num(inner_constants::p)}, {"r", num(inner_constants::r)}};
  j["parabola_residual_max"] = num(par);
  try {
    const auto k = deficit_limit(orbit, c.eps);
    j["kappa"] = num(k.kappa);
    ordered_json seq = ordered_json::array();
    for (std::size_t i = 0; i < k.eps.size(); ++i) {
      seq.push_back({{"eps", num(k.eps[i])}, {"kappa", num(k.values[i])}});
    }
    j["kappa_sequence"] = seq;
  } catch (const NonConvergent& e) {
    j["kappa"] = nullptr;
    j["kappa_error"] = e.what();
  }
  std::string csv = "eta,y1,y2\n";
  for (const auto& s : orbit.samples) csv += fmt(s.eta) + "," + fmt(s.y1) + "," + fmt(s.y2) + "\n";
  if (!out.dir.empty()) std::ofstream(out.path("inner_orbit.csv")) << csv;
  out.json("inner", j);
  return 0;
}

ordered_json curve_checks_json(const InvariantRegionReport& rep) {
  ordered_json j;
  j["proposition"] = rep.proposition;
  j["window"] = ordered_json::array({num(rep.e_lo), num(rep.e_hi)});
  j["window_ok"] = rep.window_ok;
  j["curves"] = ordered_json::array();
  for (const auto& cc : rep.curves) {
    ordered_json v = ordered_json::array();
    for (double x : cc.violations) v.push_back(num(x));
    j["curves"].push_back({{"name", cc.name},
                           {"v_range", ordered_json::array({num(cc.v_lo), num(cc.v_hi)})},
                           {"samples", cc.samples},
                           {"passed", cc.passed},
                           {"violations", v}});
  }
  j["all_pass"] = rep.all_pass();
  return j;
}

ordered_json chart_point_json(const Chart2Point& p) {
  ordered_json a = ordered_json::array();
  for (double x : p.to_array()) a.push_back(num(x));
  return a;
}

int cmd_gspt(const Config& c, const Output& out) {
  c.exps.validate();
  const auto eq = equilibria_and_eigen(c.exps);
  ordered_json j;
  j["exponents"] = {{"beta1", num(c.exps.beta1)}, {"beta2", num(c.exps.beta2)},
                    {"beta3", num(c.exps.beta3)}, {"beta4", num(c.exps.beta4)}};
  j["roots"] = ordered_json::array();
  for (double r : eq.roots) j["roots"].push_back(num(r));
  j["equilibria"] = ordered_json::array();
  for (const auto& r : eq.reports) {
    j["equilibria"].push_back({{"a", num(r.a_value)},
                               {"eigen_a", num(r.eigen_a)},
                               {"eigen_r", num(r.eigen_r)},
                               {"eigen_b", num(r.eigen_b)},
                               {"zero_multiplicity", r.zero_multiplicity},
                               {"stability", r.stability}});
  }
  const auto q = q_points(c.ul, c.ur);
  j["singular_shock"] = {{"s", num(q.shock.s)}, {"k", num(q.shock.k)}};
  j["q_points"] = {{"q_l", chart_point_json(q.q_l)},
                   {"q_r", chart_point_json(q.q_r)},
                   {"y2_bar", num(q.y2_bar)},
                   {"w_l", ordered_json::array({num(q.w_l[0]), num(q.w_l[1])})},
                   {"w_r", ordered_json::array({num(q.w_r[0]), num(q.w_r[1])})}};
  j["invariant_regions"] = ordered_json::array();
  for (auto [kind, anchor] : {std::pair{RegionAnchor::Left, c.ul}, std::pair{RegionAnchor::Right, c.ur}}) {
    const auto [lo, hi] = slope_window(anchor);
    const InvariantRegionSpec spec{kind, anchor, 0.5 * (lo + hi), true};
    auto rep = curve_checks_json(invariant_region_check(spec, q.shock.s, 200));
    rep["E"] = num(spec.E);
    j["invariant_regions"].push_back(rep);
  }
  out.json("gspt_check", j);
  return 0;
}

ordered_json peaks_json(const fv::Peaks& p) {
  return {{"max_y", num(p.max_y)},
          {"min_v", num(p.min_v)},
          {"max_y_minus_v", num(p.max_y_minus_v)},
          {"max_v_minus_y", num(p.max_v_minus_y)}};
}

int cmd_simulate(const Config& c, const Output& out) {
  fv::SimConfig sc;
  sc.cfl = c.cfl;
  sc.t_end = c.t_end;
  sc.n_snapshots = c.snapshots;
  sc.scheme = c.scheme == "lxf" ? fv::Scheme::LxF : fv::Scheme::LLxF;
  const double level = c.level.value_or(0.5 * (c.ul.v + c.ur.v));
  const bool singular = classify_pair(c.ul, c.ur, c.params, c.enforce_triangle).region == 6;

  ordered_json table = ordered_json::array();
  ordered_json final_report;
  for (int lev = c.levels - 1; lev >= 0; --lev) {
    const int n = c.n >> lev;
    const auto grid = fv::Grid1D::make(c.x_min, c.x_max, n);
    const auto r = fv::simulate(c.ul, c.ur, grid, sc);
    ordered_json row;
    row["n"] = n;
    row["steps"] = r.steps;
    row["max_conservation_defect"] = num(r.max_conservation_defect);
    try {
      const auto front = fv::measure_front_speed(r, 0, level);
      row["s_hat"] = num(front.speed);
      if (singular) {
        try {
          row["k_hat"] = num(fv::measure_deficit_rate(r, front, c.ul, c.ur, c.window).k_hat);
        } catch (const DomainError& e) {
          row["k_hat"] = nullptr;
          row["k_hat_error"] = e.what();
        }
      }
    } catch (const NoFront& e) {
      row["s_hat"] = nullptr;
      row["front_error"] = e.what();
    }
    row["peaks"] = peaks_json(fv::peaks(r.snapshots.back()));
    if (lev == 0) {
      final_report = row;
      if (!out.dir.empty()) {
        for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
          const auto& s = r.snapshots[k];
          std::string csv = "x,v,y\n";
          for (int i = 0; i < n; ++i) {
            csv += fmt(grid.center(i)) + "," + fmt(s.cells[i].v) + "," + fmt(s.cells[i].y) + "\n";
          }
          char name[64];
          std::snprintf(name, sizeof name, "snapshot_%03zu.csv", k);
          std::ofstream(out.path(name)) << "# t=" << fmt(s.t) << "\n" << csv;
        }
      }
    }
    table.push_back(row);
  }
  ordered_json j;
  j["ul"] = state_json(c.ul);
  j["ur"] = state_json(c.ur);
  j["n"] = c.n;
  j["t_end"] = num(c.t_end);
  j["front_level_v"] = num(level);
  j["deficit_half_width"] = num(c.window);
  if (singular) {
    const auto d = singular_shock_data(c.ul, c.ur);
    j["exact"] = {{"s", num(d.s)}, {"k", num(d.k)}};
  }
  j["s_hat"] = final_report.value("s_hat", ordered_json());
  j["k_hat"] = final_report.value("k_hat", ordered_json());
  j["peaks"] = final_report["peaks"];
  j["refinement_table"] = table;
  out.json("simulate", j);
  return 0;
}

/// Cross-checks of quantities that are available by two routes. Any failure
/// is an internal inconsistency (exit 2).
int cmd_validate(const Config& c, const Output& out) {
  ordered_json checks = ordered_json::array();
  bool ok = true;
  auto record = [&](const std::string& name, double err, double tol) {
    const bool pass = std::isfinite(err) && err <= tol;
    ok = ok && pass;
    checks.push_back({{"name", name}, {"error", num(err)}, {"tol", num(tol)}, {"pass", pass}});
  };
  const double tol = c.tol;

  // Eigenpairs at U_L and U_R.
  for (State u : {c.ul, c.ur}) {
    const auto e = eigen(u);
    const auto J = jacobian(u);
    double res = 0.0;
    for (const auto& f : {e.first, e.second}) {
      res = std::max(res, std::hypot(J[0][0] * f.eigvec[0] + J[0][1] * f.eigvec[1] - f.lambda * f.eigvec[0],
                                     J[1][0] * f.eigvec[0] + J[1][1] * f.eigvec[1] - f.lambda * f.eigvec[1]));
    }
    record("eigen_residual(" + fmt(u.v) + "," + fmt(u.y) + ")", res, tol);
  }

  // Rankine-Hugoniot residuals along the shocks of the solution.
  const auto sol = solve(c.ul, c.ur, c.params, c.enforce_triangle);
  for (const auto& w : sol.waves) {
    if (const auto* s = std::get_if<Shock>(&w)) {
      const auto r = rh_residuals(s->left, s->right, s->speed);
      record("rankine_hugoniot_" + std::to_string(s->family),
             std::max(std::abs(r[0]), std::abs(r[1])), tol);
    } else if (const auto* ss = std::get_if<SingularShock>(&w)) {
      const auto r = rh_residuals(ss->left, ss->right, ss->speed);
      record("singular_first_rh", std::abs(r[0]), tol);
      // The second residual is the deficit itself.
      record("singular_deficit", std::abs(r[1] - ss->deficit), tol);
    }
  }
  // Wave-curve membership of consecutive states.
  for (const auto& w : sol.waves) {
    if (const auto* s = std::get_if<Shock>(&w)) {
      const WaveCurve curve(s->family == 1 ? CurveKind::S1 : CurveKind::S2, s->left);
      record("on_S" + std::to_string(s->family), std::abs(curve.residual(s->right)), 1e-8);
    } else if (const auto* r = std::get_if<Rarefaction>(&w)) {
      const WaveCurve curve(r->family == 1 ? CurveKind::R1 : CurveKind::R2, r->left);
      record("on_R" + std::to_string(r->family), std::abs(curve.residual(r->right)), 1e-8);
    }
  }

  // Special points against their defining relations.
  const auto sp = special_points(c.ul, c.params);
  record("U_G_on_parabola", std::abs(discriminant(sp.G)), tol);
  record("U_G_on_R1", std::abs(WaveCurve(CurveKind::R1, c.ul).residual(sp.G)), tol);
  record("U_D_on_parabola", std::abs(discriminant(sp.D)), tol);
  record("U_D_on_R2", std::abs(WaveCurve(CurveKind::R2, c.ul).residual(sp.D)), tol);

  // Chart-2 root against the closed form.
  const auto roots = chart2_roots(c.exps);
  record("chart2_root_a2", roots.empty() ? INFINITY : std::abs(roots.back() - kA2), tol);

  ordered_json j;
  j["checks"] = checks;
  j["ok"] = ok;
  out.json("validate", j);
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemann solver and singular-shock toolkit for the chromatography system"};
  app.require_subcommand(1);

  std::optional<std::string> ul, ur, out, y0, eps, xi_range, v_range, x_range, scheme;
  std::optional<double> alpha1, alpha2, cfl, t_end, tol, window, level;
  std::optional<double> beta[4];
  std::optional<int> n, samples, snapshots, levels;
  std::optional<std::string> curve;
  bool enforce_triangle = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--ul", ul, "left state v,y");
    sub->add_option("--ur", ur, "right state v,y");
    sub->add_option("--alpha1", alpha1, "isotherm parameter alpha1");
    sub->add_option("--alpha2", alpha2, "isotherm parameter alpha2");
    sub->add_option("--beta1", beta[0], "regularization exponent beta1");
    sub->add_option("--beta2", beta[1], "regularization exponent beta2");
    sub->add_option("--beta3", beta[2], "regularization exponent beta3");
    sub->add_option("--beta4", beta[3], "regularization exponent beta4");
    sub->add_option("--n", n, "cell count");
    sub->add_option("--cfl", cfl, "Courant number in (0, 0.5]");
    sub->add_option("--t-end", t_end, "final simulation time");
    sub->add_option("--out", out, "directory for file outputs");
    sub->add_option("--tol", tol, "tolerance for checks and integration");
    sub->add_flag("--enforce-triangle", enforce_triangle, "require data inside the physical triangle");
  };

  auto* classify = app.add_subcommand("classify", "Riemann region of a data pair");
  auto* solve_cmd = app.add_subcommand("solve", "full Riemann solution as JSON");
  auto* profile = app.add_subcommand("profile", "self-similar profile (xi, v, y) as CSV");
  auto* curves = app.add_subcommand("curves", "wave curves through U_L as CSV");
  auto* inner = app.add_subcommand("inner", "homoclinic inner orbit and asymptotic fit");
  auto* gspt = app.add_subcommand("gspt-check", "chart-2 equilibria and invariant-region checks");
  auto* simulate = app.add_subcommand("simulate", "finite-volume run with front measurements");
  auto* validate = app.add_subcommand("validate", "internal-consistency cross-checks");
  for (auto* s : {classify, solve_cmd, profile, curves, inner, gspt, simulate, validate}) common(s);
  profile->add_option("--xi-range", xi_range, "xi_min,xi_max");
  profile->add_option("--samples", samples);
  curves->add_option("--curve", curve, "R1|R2|S1|S2|J5|J6|parabola_4v|parabola_gn|all");
  curves->add_option("--v-range", v_range, "v_min,v_max");
  curves->add_option("--samples", samples);
  inner->add_option("--y0", y0, "initial point y1,y2");
  inner->add_option("--eps", eps, "comma-separated eps grid for the deficit limit");
  simulate->add_option("--x-range", x_range, "x_min,x_max");
  simulate->add_option("--snapshots", snapshots);
  simulate->add_option("--levels", levels, "dyadic refinement levels ending at --n");
  simulate->add_option("--scheme", scheme, "llxf|lxf");
  simulate->add_option("--window", window, "deficit window half-width");
  simulate->add_option("--level", level, "v level tracked as the front");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    Config c;
    if (const char* path = std::getenv("CHROMA_CONFIG"); path && *path) load_config_file(c, path);
    if (alpha1) c.params.alpha1 = *alpha1;
    if (alpha2) c.params.alpha2 = *alpha2;
    if (beta[0]) c.exps.beta1 = *beta[0];
    if (beta[1]) c.exps.beta2 = *beta[1];
    if (beta[2]) c.exps.beta3 = *beta[2];
    if (beta[3]) c.exps.beta4 = *beta[3];
    if (ul) c.ul = parse_pair(*ul, "--ul");
    if (ur) c.ur = parse_pair(*ur, "--ur");
    if (n) c.n = *n;
    if (cfl) c.cfl = *cfl;
    if (t_end) c.t_end = *t_end;
    if (out) c.out = *out;
    if (tol) c.tol = *tol;
    if (enforce_triangle) c.enforce_triangle = true;
    if (samples) c.samples = *samples;
    if (curve) c.curve = *curve;
    if (snapshots) c.snapshots = *snapshots;
    if (levels) c.levels = *levels;
    if (scheme) c.scheme = *scheme;
    if (window) c.window = *window;
    if (level) c.level = *level;
    if (xi_range) std::tie(c.xi_min, c.xi_max) = [&] { auto p = parse_pair(*xi_range, "--xi-range"); return std::pair{p.v, p.y}; }();
    if (v_range) std::tie(c.v_min, c.v_max) = [&] { auto p = parse_pair(*v_range, "--v-range"); return std::pair{p.v, p.y}; }();
    if (x_range) std::tie(c.x_min, c.x_max) = [&] { auto p = parse_pair(*x_range, "--x-range"); return std::pair{p.v, p.y}; }();
    if (y0) {
      const auto p = parse_pair(*y0, "--y0");
      c.y0 = {p.v, p.y};
    }
    if (eps) c.eps = parse_list(*eps, "--eps");
    finalize(c);
    const Output o{c.out};

    if (*classify) return cmd_classify(c, o);
    if (*solve_cmd) return cmd_solve(c, o);
    if (*profile) return cmd_profile(c, o);
    if (*curves) return cmd_curves(c, o);
    if (*inner) return cmd_inner(c, o);
    if (*gspt) return cmd_gspt(c, o);
    if (*simulate) return cmd_simulate(c, o);
    if (*validate) return cmd_validate(c, o);
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const InternalError& e) {
    std::cerr << "internal-consistency failure: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal-consistency failure: " << e.what() << "\n";
    return 2;
  }
}
