// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdomain/app.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "qdomain/error.hpp"
#include "qdomain/oracle.hpp"

namespace qdomain {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

const char* to_string(Method m) {
  switch (m) {
    case Method::One: return "one";
    case Method::Two: return "two";
    case Method::HeleShaw: return "heleshaw";
    case Method::Oracle: return "oracle";
  }
  return "?";
}

namespace {

// ---------------------------------------------------------------- parsing

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::Configuration, "config field '" + path + "': " + what);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string join(const std::string& path, std::size_t k) { return path + "[" + std::to_string(k) + "]"; }

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) bad(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* a : allowed) known = known || it.key() == a;
    if (!known) bad(join(path, it.key()), "unknown field");
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(path, "must be finite");
  return v;
}

double number_or(const json& obj, const char* key, const std::string& path, double fallback) {
  return obj.contains(key) ? number(obj.at(key), join(path, key)) : fallback;
}

int integer_or(const json& obj, const char* key, const std::string& path, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& j = obj.at(key);
  if (!j.is_number_integer()) bad(join(path, key), "expected an integer");
  return j.get<int>();
}

const json& required(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) bad(join(path, key), "missing");
  return obj.at(key);
}

Point point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) bad(path, "expected [x, y]");
  return {number(j[0], join(path, 0)), number(j[1], join(path, 1))};
}

std::vector<Point> points(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of [x, y] pairs");
  std::vector<Point> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(point(j[k], join(path, k)));
  return out;
}

// A number, or a list of [coeff, px, py] monomials.
Polynomial density(const json& j, const std::string& path) {
  if (j.is_number()) return Polynomial::constant(number(j, path));
  if (!j.is_array() || j.empty()) bad(path, "expected a number or a list of [coeff, px, py] terms");
  std::vector<Monomial> terms;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const json& t = j[k];
    const std::string p = join(path, k);
    if (!t.is_array() || t.size() != 3 || !t[1].is_number_integer() || !t[2].is_number_integer()) {
      bad(p, "expected [coeff, px, py] with integer exponents");
    }
    const int px = t[1].get<int>();
    const int py = t[2].get<int>();
    if (px < 0 || py < 0) bad(p, "exponents must be non-negative");
    terms.push_back({number(t[0], join(p, 0)), px, py});
  }
  return Polynomial(std::move(terms));
}

template <class F>
auto wrapped(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    bad(path, e.what());
  }
}

Shape shape(const json& j, const std::string& path) {
  if (!j.is_object()) bad(path, "expected a shape object");
  const json& kind = required(j, "kind", path);
  if (!kind.is_string()) bad(join(path, "kind"), "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "disc") {
    check_keys(j, path, {"kind", "center", "radius"});
    const Point c = point(required(j, "center", path), join(path, "center"));
    const double r = number(required(j, "radius", path), join(path, "radius"));
    return wrapped(path, [&] { return Shape::disc(c, r); });
  }
  if (k == "polygon") {
    check_keys(j, path, {"kind", "vertices"});
    auto v = points(required(j, "vertices", path), join(path, "vertices"));
    return wrapped(path, [&] { return Shape::polygon(std::move(v)); });
  }
  if (k == "union") {
    check_keys(j, path, {"kind", "parts"});
    const json& parts = required(j, "parts", path);
    if (!parts.is_array()) bad(join(path, "parts"), "expected an array of shapes");
    std::vector<Shape> out;
    for (std::size_t n = 0; n < parts.size(); ++n) out.push_back(shape(parts[n], join(join(path, "parts"), n)));
    return wrapped(path, [&] { return Shape::union_of(std::move(out)); });
  }
  bad(join(path, "kind"), "unknown shape kind '" + k + "' (disc, polygon, union)");
}

Measure measure(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) bad(path, "expected a non-empty array of components");
  std::vector<MeasureComponent> comps;
  for (std::size_t n = 0; n < j.size(); ++n) {
    const std::string p = join(path, n);
    const json& c = j[n];
    if (!c.is_object()) bad(p, "expected a component object");
    const json& kind = required(c, "kind", p);
    const std::string k = kind.is_string() ? kind.get<std::string>() : "";
    if (k == "disc") {
      check_keys(c, p, {"kind", "center", "radius", "density"});
      comps.push_back(UniformDisc{point(required(c, "center", p), join(p, "center")),
                                  number(required(c, "radius", p), join(p, "radius")),
                                  c.contains("density") ? density(c["density"], join(p, "density"))
                                                        : Polynomial::constant(1.0)});
    } else if (k == "polygon") {
      check_keys(c, p, {"kind", "vertices", "density"});
      comps.push_back(WeightedPolygon{points(required(c, "vertices", p), join(p, "vertices")),
                                      c.contains("density") ? density(c["density"], join(p, "density"))
                                                            : Polynomial::constant(1.0)});
    } else if (k == "point") {
      check_keys(c, p, {"kind", "location", "mass", "epsilon"});
      comps.push_back(PointMass{point(required(c, "location", p), join(p, "location")),
                                number(required(c, "mass", p), join(p, "mass")), number_or(c, "epsilon", p, 0.0)});
    } else {
      bad(join(p, "kind"), "unknown measure kind (disc, polygon, point)");
    }
  }
  return wrapped(path, [&] { return Measure(std::move(comps)); });
}

void parse_method_one(const json& j, MethodOneConfig& c) {
  const std::string p = "method_one";
  check_keys(j, p, {"tol", "max_iters", "theta_iters", "tau", "zeta", "theta0", "theta", "extension_forcing",
                    "max_step_cells", "mass_guard"});
  c.tol = number_or(j, "tol", p, c.tol);
  c.max_iters = integer_or(j, "max_iters", p, c.max_iters);
  c.theta_iters = integer_or(j, "theta_iters", p, c.theta_iters);
  c.tau = number_or(j, "tau", p, c.tau);
  c.zeta = number_or(j, "zeta", p, c.zeta);
  c.theta0 = number_or(j, "theta", p, number_or(j, "theta0", p, c.theta0));
  c.max_step_cells = number_or(j, "max_step_cells", p, c.max_step_cells);
  c.mass_guard = number_or(j, "mass_guard", p, c.mass_guard);
  if (j.contains("extension_forcing")) {
    const json& f = j["extension_forcing"];
    if (f == "one") c.extension_forcing = ExtensionForcing::One;
    else if (f == "zero") c.extension_forcing = ExtensionForcing::Zero;
    else bad(join(p, "extension_forcing"), "expected \"one\" or \"zero\"");
  }
  wrapped(p, [&] { c.validate(); return 0; });
}

void parse_method_two(const json& j, MethodTwoConfig& c) {
  const std::string p = "method_two";
  check_keys(j, p, {"grad_tol", "max_iters", "beta", "spacing", "max_halvings"});
  c.grad_tol = number_or(j, "grad_tol", p, c.grad_tol);
  c.max_iters = integer_or(j, "max_iters", p, c.max_iters);
  c.beta = number_or(j, "beta", p, c.beta);
  c.spacing = number_or(j, "spacing", p, c.spacing);
  c.max_halvings = integer_or(j, "max_halvings", p, c.max_halvings);
  wrapped(p, [&] { c.validate(); return 0; });
}

HeleShawRun make_run(const RunConfig& cfg) {
  return HeleShawRun{cfg.heleshaw.d0, *cfg.measure, cfg.heleshaw.times, cfg.method_one, cfg.heleshaw.initial_offset};
}

// ------------------------------------------------------------- serializing

ojson to_json(Point p) { return ojson::array({p.x, p.y}); }

ojson to_json(const std::vector<Point>& v) {
  ojson out = ojson::array();
  for (Point p : v) out.push_back(to_json(p));
  return out;
}

ojson to_json(const Polynomial& g) {
  if (g.is_constant()) return g.terms().empty() ? 0.0 : g.terms().front().coeff;
  ojson out = ojson::array();
  for (const Monomial& m : g.terms()) out.push_back(ojson::array({m.coeff, m.px, m.py}));
  return out;
}

ojson to_json(const Shape& s) {
  switch (s.kind()) {
    case Shape::Kind::Disc:
      return {{"kind", "disc"}, {"center", to_json(s.center())}, {"radius", s.radius()}};
    case Shape::Kind::Polygon:
      return {{"kind", "polygon"}, {"vertices", to_json(s.vertices())}};
    case Shape::Kind::Union: {
      ojson parts = ojson::array();
      for (const Shape& p : s.parts()) parts.push_back(to_json(p));
      return {{"kind", "union"}, {"parts", parts}};
    }
  }
  return {};
}

ojson to_json(const Measure& mu) {
  ojson out = ojson::array();
  for (const MeasureComponent& c : mu.components()) {
    if (const auto* d = std::get_if<UniformDisc>(&c)) {
      out.push_back({{"kind", "disc"}, {"center", to_json(d->center)}, {"radius", d->radius},
                     {"density", to_json(d->density)}});
    } else if (const auto* w = std::get_if<WeightedPolygon>(&c)) {
      out.push_back({{"kind", "polygon"}, {"vertices", to_json(w->vertices)}, {"density", to_json(w->density)}});
    } else {
      const auto& m = std::get<PointMass>(c);
      out.push_back({{"kind", "point"}, {"location", to_json(m.location)}, {"mass", m.mass}, {"epsilon", m.epsilon}});
    }
  }
  return out;
}

ojson to_json(const SakaiRadii& s) {
  return {{"center", to_json(s.center)},
          {"r_mu", s.r_mu},
          {"R", s.R},
          {"outer", s.outer},
          {"inner", s.inner ? ojson(*s.inner) : ojson(nullptr)},
          {"outer_sup", s.outer_sup}};
}

ojson to_json(const IterationReport& r) {
  return {{"type", "iteration"},        {"k", r.k},
          {"sup_boundary_u", r.sup_boundary_u}, {"mass_defect", r.mass_defect},
          {"area", r.area},             {"max_displacement", r.max_displacement},
          {"theta", r.theta},           {"cg_iterations", r.cg_iterations},
          {"clamped_velocities", r.clamped_velocities}};
}

ojson to_json(const MethodTwoReport& r) {
  return {{"type", "iteration"},         {"k", r.k},
          {"grad_norm", r.grad_norm},    {"energy", r.energy},
          {"area", r.area},              {"mass_defect", r.mass_defect},
          {"beta", r.beta},              {"max_displacement", r.max_displacement},
          {"tangential_residual", r.tangential_residual}, {"markers", r.markers},
          {"cg_iterations", r.cg_iterations}};
}

// Shortest round-trip spelling, used in file names such as d_t_3.5.csv.
std::string format_time(double t) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, t);
  return std::string(buf, res.ptr);
}

// --------------------------------------------------------------- artifacts

class Artifacts {
 public:
  explicit Artifacts(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create output directory '" + dir + "': " + ec.message());
    log_.open(dir_ / "iterations.jsonl");
    if (!log_) throw Error(ErrorKind::Io, "cannot write " + (dir_ / "iterations.jsonl").string());
  }

  void log(const ojson& record) { log_ << record.dump() << '\n'; }
  void flush() { log_.flush(); }

  void field(const std::string& name, const ScalarField& f) { save_csv((dir_ / name).string(), f); }
  void curve(const std::string& name, const MarkerCurve& c) { save_csv((dir_ / name).string(), c); }

  // Every component in one file, separated by a blank line and a comment.
  void contours(const std::string& name, const std::vector<MarkerCurve>& cs) {
    std::ofstream out(dir_ / name);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + (dir_ / name).string());
    for (std::size_t k = 0; k < cs.size(); ++k) {
      if (k > 0) out << '\n';
      out << "# component " << k << '\n';
      write_csv(out, cs[k]);
    }
  }

  void text(const std::string& name, const std::string& body) {
    std::ofstream out(dir_ / name);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + (dir_ / name).string());
    out << body << '\n';
  }

 private:
  fs::path dir_;
  std::ofstream log_;
};

std::vector<std::vector<Point>> as_polylines(const std::vector<MarkerCurve>& cs) {
  std::vector<std::vector<Point>> out;
  for (const MarkerCurve& c : cs) out.push_back(c.vertices);
  return out;
}

// Contour-vertex test of the Sakai inclusions, each with slack h.
ojson sakai_check(const SakaiRadii& s, const std::vector<MarkerCurve>& contours, double h) {
  double rmax = 0.0;
  double rmin = std::numeric_limits<double>::infinity();
  for (const MarkerCurve& c : contours) {
    for (Point p : c.vertices) {
      rmax = std::max(rmax, distance(p, s.center));
      rmin = std::min(rmin, distance(p, s.center));
    }
  }
  ojson out = to_json(s);
  if (contours.empty()) rmin = 0.0;
  out["max_vertex_radius"] = rmax;
  out["min_vertex_radius"] = rmin;
  out["outer_pass"] = !contours.empty() && rmax <= s.outer + h;
  out["inner_pass"] = s.inner ? ojson(rmin >= *s.inner - h) : ojson(nullptr);
  return out;
}

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Configuration:
    case ErrorKind::Parameter: return kExitConfig;
    case ErrorKind::Invariant: return kExitInvariant;
    default: return kExitNotConverged;
  }
}

// mu = M chi_{B(c, a)} with constant M > 1.
std::optional<RadialCase> radial_case(const Measure& mu) {
  if (mu.components().size() != 1) return std::nullopt;
  const auto* d = std::get_if<UniformDisc>(&mu.components().front());
  if (!d || !d->density.is_constant()) return std::nullopt;
  const double M = d->density.terms().front().coeff;
  if (!(M > 1.0)) return std::nullopt;
  return RadialCase{d->center, d->radius, M, 2};
}

std::vector<MarkerCurve> circle_polyline(Point c, double r, int n = 2048) {
  MarkerCurve out;
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n;
    out.vertices.push_back(c + Vec2{std::cos(a), std::sin(a)} * r);
  }
  return {out};
}

ojson shape_derivative_report(const MarkerCurve& sigma, const Measure& mu, const Grid2D& g) {
  const ScalarField rho = rasterize(mu, g);
  const ScalarField u = solve_on_polygon(sigma, rho);
  Point c{};
  for (Point p : sigma.vertices) c += p;
  c = c / static_cast<double>(sigma.vertices.size());
  std::vector<double> vn;
  for (Point p : sigma.vertices) vn.push_back(1.0 + 0.5 * std::cos(std::atan2(p.y - c.y, p.x - c.x)));
  const ShapeDerivativeCheck chk = shape_derivative_check(sigma, u, vn, rho);
  const double rel = std::abs(chk.analytic - chk.finite_diff) / std::max(std::abs(chk.finite_diff), 1e-300);
  return {{"velocity", "1 + 0.5 cos(angle about the marker centroid)"},
          {"analytic", chk.analytic},
          {"central_difference", chk.finite_diff},
          {"forward_difference", chk.forward_diff},
          {"epsilon", chk.epsilon},
          {"relative_error", rel},
          {"pass", rel <= 0.05}};
}

MarkerCurve largest(const std::vector<MarkerCurve>& cs) {
  MarkerCurve best;
  double area = -1.0;
  for (const MarkerCurve& c : cs) {
    const double a = std::abs(signed_area(c.vertices));
    if (a > area) {
      area = a;
      best = c;
    }
  }
  return best;
}

}  // namespace

// ------------------------------------------------------------------ public

Measure solver_measure(const RunConfig& cfg) {
  if (cfg.method != Method::HeleShaw) return *cfg.measure;
  return heleshaw_measure(make_run(cfg), cfg.heleshaw.times.back());
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Configuration, std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "", {"method", "measure", "grid", "initial_domain", "method_one", "method_two", "heleshaw",
                     "output_dir"});

  RunConfig cfg;
  const json& m = required(j, "method", "");
  if (m == "one") cfg.method = Method::One;
  else if (m == "two") cfg.method = Method::Two;
  else if (m == "heleshaw") cfg.method = Method::HeleShaw;
  else if (m == "oracle") cfg.method = Method::Oracle;
  else bad("method", "expected \"one\", \"two\", \"heleshaw\" or \"oracle\"");

  if (j.contains("grid")) {
    const json& gj = j["grid"];
    // nx, ny and origin appear in the resolved echo and are recomputed here.
    check_keys(gj, "grid", {"h", "padding_factor", "box", "nx", "ny", "origin"});
    cfg.grid.h = number_or(gj, "h", "grid", cfg.grid.h);
    cfg.grid.padding_factor = number_or(gj, "padding_factor", "grid", cfg.grid.padding_factor);
    if (gj.contains("box")) {
      const json& b = gj["box"];
      if (!b.is_array() || b.size() != 2) bad("grid.box", "expected [[x0, y0], [x1, y1]]");
      cfg.grid.box = std::pair{point(b[0], "grid.box[0]"), point(b[1], "grid.box[1]")};
      if (!(cfg.grid.box->first.x < cfg.grid.box->second.x && cfg.grid.box->first.y < cfg.grid.box->second.y)) {
        bad("grid.box", "lower corner must lie below and left of the upper corner");
      }
    }
  }
  if (!(cfg.grid.h > 0.0)) bad("grid.h", "must be positive");
  if (cfg.grid.padding_factor < 1.1) bad("grid.padding_factor", "must be at least 1.1");

  cfg.measure = measure(required(j, "measure", ""), "measure").with_point_radius(3.0 * cfg.grid.h);

  if (j.contains("method_one")) parse_method_one(j["method_one"], cfg.method_one);
  if (j.contains("method_two")) parse_method_two(j["method_two"], cfg.method_two);

  if (j.contains("heleshaw")) {
    const json& hj = j["heleshaw"];
    check_keys(hj, "heleshaw", {"d0", "times", "initial_offset"});
    if (hj.contains("d0") && !hj["d0"].is_null()) cfg.heleshaw.d0 = shape(hj["d0"], "heleshaw.d0");
    if (hj.contains("times")) {
      const json& t = hj["times"];
      if (!t.is_array()) bad("heleshaw.times", "expected an array");
      for (std::size_t k = 0; k < t.size(); ++k) {
        const double v = number(t[k], join("heleshaw.times", k));
        if (v < 0.0) bad(join("heleshaw.times", k), "must be non-negative");
        if (k > 0 && v < cfg.heleshaw.times.back()) bad(join("heleshaw.times", k), "times must be non-decreasing");
        cfg.heleshaw.times.push_back(v);
      }
    }
    cfg.heleshaw.initial_offset = number_or(hj, "initial_offset", "heleshaw", 0.0);
    if (cfg.heleshaw.initial_offset < 0.0) bad("heleshaw.initial_offset", "must be non-negative");
  }
  if (cfg.method == Method::HeleShaw && cfg.heleshaw.times.empty()) bad("heleshaw.times", "needs at least one time");

  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) bad("output_dir", "expected a string");
    cfg.output_dir = j["output_dir"].get<std::string>();
  }

  // Grid sizing from the Sakai outer ball of the measure the solver sees.
  const Measure mu = wrapped("heleshaw", [&] { return solver_measure(cfg); });
  cfg.sakai = sakai_radii(mu);
  const double h = cfg.grid.h;
  Point lo;
  Point hi;
  if (cfg.grid.box) {
    std::tie(lo, hi) = *cfg.grid.box;
  } else {
    const double half = cfg.grid.padding_factor * cfg.sakai.outer;
    lo = cfg.sakai.center - Vec2{half, half};
    hi = cfg.sakai.center + Vec2{half, half};
  }
  if ((hi.x - lo.x) / h > 6000.0 || (hi.y - lo.y) / h > 6000.0) {
    bad("grid.h", "grid would exceed 6000 nodes per side; increase h");
  }
  cfg.resolved_grid = Grid2D::covering(lo, hi, h);
  const auto [slo, shi] = mu.support_bounds();
  if (cfg.resolved_grid->margin(slo) < h || cfg.resolved_grid->margin(shi) < h) {
    std::ostringstream msg;
    msg << "support of the measure does not fit inside the grid (Sakai outer radius r(mu) + R = " << cfg.sakai.outer
        << " about (" << cfg.sakai.center.x << ", " << cfg.sakai.center.y << "))";
    bad("grid.box", msg.str());
  }

  if (j.contains("initial_domain")) {
    const json& d = j["initial_domain"];
    const bool is_auto = d == "auto" || (d.is_object() && d.contains("kind") && d["kind"] == "auto");
    if (is_auto) {
      if (d.is_object()) {
        check_keys(d, "initial_domain", {"kind", "offset", "radius"});
        if (d.contains("offset")) cfg.initial_domain.offset = number(d["offset"], "initial_domain.offset");
        if (d.contains("radius")) cfg.initial_domain.radius = number(d["radius"], "initial_domain.radius");
      }
    } else {
      cfg.initial_domain.shape = shape(d, "initial_domain");
    }
  }
  if (!cfg.initial_domain.shape) {
    if (!cfg.initial_domain.offset) cfg.initial_domain.offset = 0.1 * cfg.sakai.r_mu;
    if (!cfg.initial_domain.radius) cfg.initial_domain.radius = 1.02 * cfg.sakai.R + 2.0 * h;
    if (*cfg.initial_domain.offset < 0.0) bad("initial_domain.offset", "must be non-negative");
    if (!(*cfg.initial_domain.radius > 0.0)) bad("initial_domain.radius", "must be positive");
  }
  return cfg;
}

nlohmann::ordered_json resolved_json(const RunConfig& cfg) {
  const Grid2D& g = *cfg.resolved_grid;
  ojson out;
  out["method"] = to_string(cfg.method);
  out["measure"] = to_json(*cfg.measure);
  out["grid"] = {{"h", cfg.grid.h},
                 {"padding_factor", cfg.grid.padding_factor},
                 {"box", ojson::array({to_json(g.origin()), to_json(g.upper())})},
                 {"nx", g.nx()},
                 {"ny", g.ny()}};
  if (cfg.initial_domain.shape) {
    out["initial_domain"] = to_json(*cfg.initial_domain.shape);
  } else {
    out["initial_domain"] = {{"kind", "auto"},
                             {"offset", *cfg.initial_domain.offset},
                             {"radius", *cfg.initial_domain.radius}};
  }
  const MethodOneConfig& a = cfg.method_one;
  out["method_one"] = {{"tol", a.tol},
                       {"max_iters", a.max_iters},
                       {"theta_iters", a.theta_iters},
                       {"tau", a.tau},
                       {"zeta", a.zeta},
                       {"theta0", a.theta0},
                       {"extension_forcing", a.extension_forcing == ExtensionForcing::One ? "one" : "zero"},
                       {"max_step_cells", a.max_step_cells},
                       {"mass_guard", a.mass_guard}};
  const MethodTwoConfig& b = cfg.method_two;
  out["method_two"] = {{"grad_tol", b.grad_tol},
                       {"max_iters", b.max_iters},
                       {"beta", b.beta},
                       {"spacing", b.spacing > 0.0 ? b.spacing : 2.0 * cfg.grid.h},
                       {"max_halvings", b.max_halvings}};
  out["heleshaw"] = {{"d0", cfg.heleshaw.d0 ? to_json(*cfg.heleshaw.d0) : ojson(nullptr)},
                     {"times", cfg.heleshaw.times},
                     {"initial_offset", cfg.heleshaw.initial_offset}};
  out["output_dir"] = cfg.output_dir;
  return out;
}

LevelSetFn initial_level_set(const RunConfig& cfg) {
  const Grid2D& g = *cfg.resolved_grid;
  if (cfg.initial_domain.shape) return from_shape(*cfg.initial_domain.shape, g);
  return support_level_set(solver_measure(cfg), g, *cfg.initial_domain.offset);
}

MarkerCurve initial_curve(const RunConfig& cfg) {
  const double h = cfg.grid.h;
  const double spacing = cfg.method_two.spacing > 0.0 ? cfg.method_two.spacing : 2.0 * h;
  const auto circle = [&](Point c, double r) {
    const int n = std::max(16, static_cast<int>(std::ceil(2.0 * std::numbers::pi * r / spacing)));
    return circle_polyline(c, r, n).front();
  };
  if (!cfg.initial_domain.shape) return circle(cfg.sakai.center, *cfg.initial_domain.radius);
  const Shape& s = *cfg.initial_domain.shape;
  switch (s.kind()) {
    case Shape::Kind::Disc: return circle(s.center(), s.radius());
    case Shape::Kind::Polygon: return resample(MarkerCurve{s.vertices()}, spacing);
    case Shape::Kind::Union: break;
  }
  throw Error(ErrorKind::Configuration, "config field 'initial_domain': method two needs a single disc or polygon");
}

nlohmann::ordered_json oracle_table(const RunConfig& cfg) {
  const Measure mu = solver_measure(cfg);
  const SakaiRadii s = sakai_radii(mu);
  ojson out;
  out["total_mass"] = total_mass(mu);
  out["sakai"] = to_json(s);
  ojson comps = ojson::array();
  for (const MeasureComponent& c : mu.components()) {
    const double m = component_mass(c);
    const char* kind = std::holds_alternative<UniformDisc>(c)     ? "disc"
                       : std::holds_alternative<PointMass>(c)     ? "point"
                                                                  : "polygon";
    comps.push_back({{"kind", kind}, {"mass", m}, {"equal_area_radius", point_mass_domain(m, 2)}});
  }
  out["components"] = comps;
  if (const auto rc = radial_case(mu)) {
    ojson rows = ojson::array();
    const double r = rc->r();
    for (int k = 0; k <= 10; ++k) {
      const double sd = r * k / 10.0;
      rows.push_back({{"s", sd}, {"u", radial_u(*rc, sd)}, {"du", radial_du(*rc, sd)}});
    }
    out["radial"] = {{"a", rc->a}, {"M", rc->M}, {"r", r}, {"profile", rows}};
  } else {
    out["radial"] = nullptr;
  }
  return out;
}

RunOutcome execute(const RunConfig& cfg, const RunFlags& flags) {
  const auto start = std::chrono::steady_clock::now();
  const Grid2D& g = *cfg.resolved_grid;
  const double h = g.h();
  Artifacts art(cfg.output_dir);
  art.text("resolved_config.json", resolved_json(cfg).dump(2));

  RunOutcome out;
  ojson& sum = out.summary;
  sum["method"] = to_string(cfg.method);
  sum["grid"] = {{"nx", g.nx()}, {"ny", g.ny()}, {"h", h}, {"origin", to_json(g.origin())}};
  const Measure mu = solver_measure(cfg);
  sum["total_mass"] = total_mass(mu);

  const auto fail_with = [&](const Error& e) {
    out.exit_code = exit_for(e);
    out.message = e.what();
  };

  std::vector<MarkerCurve> final_contours;
  bool converged = false;
  std::optional<double> area;

  switch (cfg.method) {
    case Method::One: {
      std::optional<MethodOneResult> res;
      try {
        const LevelSetFn omega0 = initial_level_set(cfg);
        FieldSink dump;
        if (flags.dump_fields) dump = [&](int k, const LevelSetFn& phi) { art.field("phi_" + std::to_string(k) + ".csv", phi.phi()); };
        res = run_method_one(mu, omega0, cfg.method_one, [&](const IterationReport& r) { art.log(to_json(r)); }, dump);
        if (flags.verify_shape_derivative) {
          sum["shape_derivative"] = shape_derivative_report(resample(largest(omega0.contour()), 2.0 * h), mu, g);
        }
      } catch (const MethodOneFailure& f) {
        res = f.partial();
        fail_with(f);
      } catch (const Error& e) {
        fail_with(e);
      }
      if (res) {
        converged = res->converged;
        sum["iterations"] = res->iterations();
        art.field("u_final.csv", res->u);
        art.field("phi_final.csv", res->phi.phi());
        final_contours = res->phi.contour();
        art.contours("contour_final.csv", final_contours);
        area = res->phi.area();
      }
      break;
    }
    case Method::Two: {
      std::optional<MethodTwoResult> res;
      try {
        const MarkerCurve gamma0 = initial_curve(cfg);
        if (flags.verify_shape_derivative) sum["shape_derivative"] = shape_derivative_report(gamma0, mu, g);
        res = run_method_two(mu, gamma0, g, cfg.method_two, [&](const MethodTwoReport& r) { art.log(to_json(r)); });
      } catch (const MethodTwoFailure& f) {
        res = f.partial();
        fail_with(f);
      } catch (const Error& e) {
        fail_with(e);
      }
      if (res) {
        converged = res->converged;
        sum["iterations"] = res->iterations();
        art.field("u_final.csv", res->u);
        art.curve("gamma_final.csv", res->gamma);
        final_contours = {res->gamma};
        area = std::abs(signed_area(res->gamma.vertices));
      }
      break;
    }
    case Method::HeleShaw: {
      const HeleShawRun run = make_run(cfg);
      try {
        const HeleShawResult res = heleshaw_run(run, g, flags.parallel_times);
        ojson steps = ojson::array();
        bool sakai_ok = true;
        double worst = 0.0;
        for (const HeleShawStep& s : res.steps) {
          const std::string tag = format_time(s.t);
          for (const IterationReport& r : s.reports) {
            ojson rec = to_json(r);
            rec["t"] = s.t;
            art.log(rec);
          }
          const auto cs = s.d_t.contour();
          art.contours("d_t_" + tag + ".csv", cs);
          if (flags.dump_fields) {
            art.field("u_t_" + tag + ".csv", s.u_t);
            art.field("phi_t_" + tag + ".csv", s.d_t.phi());
          }
          const ojson sk = sakai_check(sakai_radii(heleshaw_measure(run, s.t)), cs, h);
          sakai_ok = sakai_ok && sk["outer_pass"].get<bool>();
          worst = std::max(worst, s.mass_defect);
          ojson rec = {{"type", "step"},
                       {"t", s.t},
                       {"iterations", s.reports.empty() ? 0 : s.reports.back().k},
                       {"area", s.d_t.area()},
                       {"mass_defect", s.mass_defect},
                       {"min_u", s.min_u},
                       {"complementarity", s.complementarity},
                       {"components", s.components},
                       {"sakai", sk}};
          art.log(rec);
          steps.push_back(rec);
        }
        ojson mono = ojson::array();
        for (const MonotonicityCheck& m : res.monotonicity) {
          ojson rec = {{"type", "monotonicity"},
                       {"t_prev", m.t_prev},
                       {"t_next", m.t_next},
                       {"max_excess", m.max_excess},
                       {"nested", m.nested}};
          art.log(rec);
          mono.push_back(rec);
        }
        converged = true;
        sum["steps"] = steps;
        sum["monotonicity"] = mono;
        sum["monotone"] = res.monotone();
        sum["mass_defect"] = worst;
        sum["mass_identity_pass"] = worst <= 0.02;
        sum["sakai_outer_pass"] = sakai_ok;
        if (!sakai_ok || !res.monotone()) {
          out.exit_code = kExitInvariant;
          out.message = !sakai_ok ? "a converged time level violates the Sakai outer bound"
                                  : "domains are not nested within one cell";
        }
      } catch (const Error& e) {
        fail_with(e);
      }
      break;
    }
    case Method::Oracle: {
      const ojson table = oracle_table(cfg);
      art.text("oracle.json", table.dump(2));
      sum["oracle"] = table;
      converged = true;
      break;
    }
  }

  if (cfg.method == Method::One || cfg.method == Method::Two) {
    if (area) {
      const double defect = mass_identity_defect(*area, mu);
      sum["area"] = *area;
      sum["mass_defect"] = defect;
      sum["mass_identity_pass"] = defect <= 0.02;
    }
    const ojson sk = sakai_check(cfg.sakai, final_contours, h);
    sum["sakai"] = sk;
    if (converged && !sk["outer_pass"].get<bool>() && out.exit_code == kExitConverged) {
      out.exit_code = kExitInvariant;
      out.message = "converged domain violates the Sakai outer bound";
    }

    if (flags.verify && converged) {
      ojson v;
      std::vector<MarkerCurve> one = cfg.method == Method::One ? final_contours : std::vector<MarkerCurve>{};
      std::vector<MarkerCurve> two = cfg.method == Method::Two ? final_contours : std::vector<MarkerCurve>{};
      try {
        if (one.empty()) one = run_method_one(mu, initial_level_set(cfg), cfg.method_one).phi.contour();
        if (two.empty()) two = {run_method_two(mu, initial_curve(cfg), g, cfg.method_two).gamma};
        const double d12 = hausdorff_distance(as_polylines(one), as_polylines(two));
        v["hausdorff_one_two"] = d12;
        v["tolerance"] = 3.0 * h;
        v["methods_agree"] = d12 <= 3.0 * h;
      } catch (const Error& e) {
        v["error"] = e.what();
        v["methods_agree"] = false;
      }
      if (const auto rc = radial_case(mu)) {
        const auto exact = as_polylines(circle_polyline(rc->center, rc->r()));
        v["oracle_radius"] = rc->r();
        if (!one.empty()) v["hausdorff_one_oracle"] = hausdorff_distance(as_polylines(one), exact);
        if (!two.empty()) v["hausdorff_two_oracle"] = hausdorff_distance(as_polylines(two), exact);
      }
      sum["verify"] = v;
    }
  }

  if (out.exit_code == kExitConverged && !converged) out.exit_code = kExitNotConverged;
  sum["converged"] = converged && out.exit_code != kExitNotConverged;
  sum["exit_code"] = out.exit_code;
  sum["message"] = out.message;
  sum["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  art.flush();
  art.text("summary.json", sum.dump(2));
  return out;
}

}  // namespace qdomain
