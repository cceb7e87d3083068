// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdomain/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qdomain/error.hpp"

namespace qdomain {

namespace {

constexpr double kPi = std::numbers::pi;

double ipow(double base, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= base;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// Coefficients of (c0 + c1 s + c2 t)^p as a dense (p+1)x(p+1) table indexed [s-power][t-power].
std::vector<std::vector<double>> trinomial(double c0, double c1, double c2, int p) {
  std::vector<std::vector<double>> out(p + 1, std::vector<double>(p + 1, 0.0));
  for (int b = 0; b <= p; ++b) {
    for (int g = 0; g + b <= p; ++g) {
      const int a = p - b - g;
      out[b][g] += factorial(p) / (factorial(a) * factorial(b) * factorial(g)) * ipow(c0, a) * ipow(c1, b) *
                   ipow(c2, g);
    }
  }
  return out;
}

// Integral of x^i y^j over the disc of radius a centred at the origin.
double centred_disc_moment(int i, int j, double a) {
  if (i % 2 || j % 2) return 0.0;
  const double angular = 2.0 * std::tgamma((i + 1) / 2.0) * std::tgamma((j + 1) / 2.0) / std::tgamma((i + j + 2) / 2.0);
  return angular * std::pow(a, i + j + 2) / (i + j + 2);
}

}  // namespace

Polynomial::Polynomial(std::vector<Monomial> terms) : terms_(std::move(terms)) {
  for (const Monomial& m : terms_) {
    if (m.px < 0 || m.py < 0) throw Error(ErrorKind::Configuration, "polynomial exponents must be non-negative");
    if (!std::isfinite(m.coeff)) throw Error(ErrorKind::Configuration, "polynomial coefficients must be finite");
  }
}

double Polynomial::operator()(Point p) const {
  double v = 0.0;
  for (const Monomial& m : terms_) v += m.coeff * ipow(p.x, m.px) * ipow(p.y, m.py);
  return v;
}

int Polynomial::degree() const {
  int d = 0;
  for (const Monomial& m : terms_) {
    if (m.coeff != 0.0) d = std::max(d, m.px + m.py);
  }
  return d;
}

Polynomial Polynomial::scaled(double s) const {
  Polynomial out = *this;
  for (Monomial& m : out.terms_) m.coeff *= s;
  return out;
}

Polynomial Polynomial::times_monomial(int px, int py) const {
  Polynomial out = *this;
  for (Monomial& m : out.terms_) {
    m.px += px;
    m.py += py;
  }
  return out;
}

double integrate_over_disc(const Polynomial& g, Point center, double radius) {
  double total = 0.0;
  for (const Monomial& m : g.terms()) {
    // (cx + xi)^px (cy + eta)^py, integrated term by term over the centred disc.
    for (int i = 0; i <= m.px; ++i) {
      for (int j = 0; j <= m.py; ++j) {
        const double moment = centred_disc_moment(i, j, radius);
        if (moment == 0.0) continue;
        total += m.coeff * binomial(m.px, i) * ipow(center.x, m.px - i) * binomial(m.py, j) *
                 ipow(center.y, m.py - j) * moment;
      }
    }
  }
  return total;
}

double integrate_over_triangle(const Polynomial& g, Point a, Point b, Point c) {
  const Vec2 e1 = b - a;
  const Vec2 e2 = c - a;
  const double jac = cross(e1, e2);
  double total = 0.0;
  for (const Monomial& m : g.terms()) {
    const auto xs = trinomial(a.x, e1.x, e2.x, m.px);
    const auto ys = trinomial(a.y, e1.y, e2.y, m.py);
    double term = 0.0;
    for (int bs = 0; bs <= m.px; ++bs) {
      for (int bt = 0; bs + bt <= m.px; ++bt) {
        if (xs[bs][bt] == 0.0) continue;
        for (int cs = 0; cs <= m.py; ++cs) {
          for (int ct = 0; cs + ct <= m.py; ++ct) {
            if (ys[cs][ct] == 0.0) continue;
            const int ps = bs + cs;
            const int pt = bt + ct;
            // Reference-triangle moment: ps! pt! / (ps + pt + 2)!
            term += xs[bs][bt] * ys[cs][ct] * factorial(ps) * factorial(pt) / factorial(ps + pt + 2);
          }
        }
      }
    }
    total += m.coeff * term;
  }
  return total * jac;
}

double integrate_over_polygon(const Polynomial& g, std::span<const Point> polygon) {
  // Signed fan from the first vertex is exact for any simple polygon.
  double total = 0.0;
  for (std::size_t k = 1; k + 1 < polygon.size(); ++k) {
    total += integrate_over_triangle(g, polygon[0], polygon[k], polygon[k + 1]);
  }
  return signed_area(polygon) >= 0.0 ? total : -total;
}

namespace {

bool polygon_is_simple(const std::vector<Point>& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return false;
    }
  }
  return true;
}

template <class InsideFn>
double sampled_min(const Polynomial& g, Point lo, Point hi, InsideFn inside, double* sup = nullptr) {
  constexpr int n = 64;
  double mn = std::numeric_limits<double>::infinity();
  double mx = -std::numeric_limits<double>::infinity();
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const Point p{lo.x + (hi.x - lo.x) * i / n, lo.y + (hi.y - lo.y) * j / n};
      if (!inside(p)) continue;
      const double v = g(p);
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
  }
  if (sup) *sup = mx;
  return mn;
}

struct ComponentGeometry {
  Point lo;
  Point hi;
};

ComponentGeometry bounds_of(const MeasureComponent& c) {
  if (const auto* d = std::get_if<UniformDisc>(&c)) {
    return {d->center - Vec2{d->radius, d->radius}, d->center + Vec2{d->radius, d->radius}};
  }
  if (const auto* p = std::get_if<PointMass>(&c)) {
    const double e = std::max(p->epsilon, 0.0);
    return {p->location - Vec2{e, e}, p->location + Vec2{e, e}};
  }
  const auto& poly = std::get<WeightedPolygon>(c);
  Point lo = poly.vertices.front();
  Point hi = lo;
  for (const Point& v : poly.vertices) {
    lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
  }
  return {lo, hi};
}

bool component_contains(const MeasureComponent& c, Point p) {
  if (const auto* d = std::get_if<UniformDisc>(&c)) return distance(p, d->center) < d->radius;
  if (const auto* m = std::get_if<PointMass>(&c)) return distance(p, m->location) < m->epsilon;
  return point_in_polygon(p, std::get<WeightedPolygon>(c).vertices);
}

double component_density(const MeasureComponent& c, Point p) {
  if (const auto* d = std::get_if<UniformDisc>(&c)) return d->density(p);
  if (const auto* m = std::get_if<PointMass>(&c)) return m->mass / (kPi * m->epsilon * m->epsilon);
  return std::get<WeightedPolygon>(c).density(p);
}

void validate(MeasureComponent& c, std::size_t index) {
  std::ostringstream where;
  where << "measure component " << index << ": ";
  if (auto* d = std::get_if<UniformDisc>(&c)) {
    if (!(d->radius > 0.0)) throw Error(ErrorKind::Configuration, where.str() + "disc radius must be positive");
    const auto b = bounds_of(c);
    if (!(sampled_min(d->density, b.lo, b.hi, [&](Point p) { return distance(p, d->center) <= d->radius; }) > 0.0)) {
      throw Error(ErrorKind::Configuration, where.str() + "disc density must be positive on the disc");
    }
  } else if (auto* m = std::get_if<PointMass>(&c)) {
    if (!(m->mass > 0.0)) throw Error(ErrorKind::Configuration, where.str() + "point mass must be positive");
  } else {
    auto& poly = std::get<WeightedPolygon>(c);
    if (poly.vertices.size() < 3) throw Error(ErrorKind::Configuration, where.str() + "polygon needs 3 vertices");
    if (!polygon_is_simple(poly.vertices)) throw Error(ErrorKind::Configuration, where.str() + "polygon is not simple");
    if (signed_area(poly.vertices) < 0.0) std::reverse(poly.vertices.begin(), poly.vertices.end());
    const auto b = bounds_of(c);
    if (!(sampled_min(poly.density, b.lo, b.hi, [&](Point p) { return point_in_polygon(p, poly.vertices); }) > 0.0)) {
      throw Error(ErrorKind::Configuration, where.str() + "polygon density must be positive on the polygon");
    }
  }
}

}  // namespace

Measure::Measure(std::vector<MeasureComponent> components) : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorKind::Configuration, "measure needs at least one component");
  for (std::size_t k = 0; k < components_.size(); ++k) validate(components_[k], k);
}

Measure Measure::scaled(double t) const {
  if (!(t > 0.0)) throw Error(ErrorKind::Parameter, "measure scale must be positive");
  std::vector<MeasureComponent> out = components_;
  for (auto& c : out) {
    if (auto* d = std::get_if<UniformDisc>(&c)) d->density = d->density.scaled(t);
    else if (auto* m = std::get_if<PointMass>(&c)) m->mass *= t;
    else std::get<WeightedPolygon>(c).density = std::get<WeightedPolygon>(c).density.scaled(t);
  }
  return Measure(std::move(out));
}

Measure Measure::plus(const Measure& other) const {
  std::vector<MeasureComponent> out = components_;
  out.insert(out.end(), other.components_.begin(), other.components_.end());
  return Measure(std::move(out));
}

Measure Measure::with_point_radius(double epsilon) const {
  std::vector<MeasureComponent> out = components_;
  for (auto& c : out) {
    if (auto* m = std::get_if<PointMass>(&c); m && !(m->epsilon > 0.0)) m->epsilon = epsilon;
  }
  return Measure(std::move(out));
}

bool Measure::in_support(Point p) const {
  return std::any_of(components_.begin(), components_.end(),
                     [&](const MeasureComponent& c) { return component_contains(c, p); });
}

std::pair<Point, Point> Measure::support_bounds() const {
  auto b = bounds_of(components_.front());
  for (const auto& c : components_) {
    const auto cb = bounds_of(c);
    b.lo = {std::min(b.lo.x, cb.lo.x), std::min(b.lo.y, cb.lo.y)};
    b.hi = {std::max(b.hi.x, cb.hi.x), std::max(b.hi.y, cb.hi.y)};
  }
  return {b.lo, b.hi};
}

double component_mass(const MeasureComponent& c) {
  if (const auto* d = std::get_if<UniformDisc>(&c)) return integrate_over_disc(d->density, d->center, d->radius);
  if (const auto* m = std::get_if<PointMass>(&c)) return m->mass;
  const auto& poly = std::get<WeightedPolygon>(c);
  return integrate_over_polygon(poly.density, poly.vertices);
}

double total_mass(const Measure& mu) {
  double m = 0.0;
  for (const auto& c : mu.components()) m += component_mass(c);
  return m;
}

Point mass_centroid(const Measure& mu) {
  Vec2 first_moment{};
  for (const auto& c : mu.components()) {
    if (const auto* d = std::get_if<UniformDisc>(&c)) {
      first_moment += {integrate_over_disc(d->density.times_monomial(1, 0), d->center, d->radius),
                       integrate_over_disc(d->density.times_monomial(0, 1), d->center, d->radius)};
    } else if (const auto* m = std::get_if<PointMass>(&c)) {
      first_moment += m->location * m->mass;
    } else {
      const auto& poly = std::get<WeightedPolygon>(c);
      first_moment += {integrate_over_polygon(poly.density.times_monomial(1, 0), poly.vertices),
                       integrate_over_polygon(poly.density.times_monomial(0, 1), poly.vertices)};
    }
  }
  return first_moment / total_mass(mu);
}

SakaiRadii sakai_radii(const Measure& mu) {
  SakaiRadii s;
  s.center = mass_centroid(mu);
  const double mass = total_mass(mu);
  s.r_mu = std::sqrt(mass / kPi);
  double sup_mass = 0.0;
  for (const auto& c : mu.components()) {
    if (const auto* d = std::get_if<UniformDisc>(&c)) {
      s.R = std::max(s.R, distance(s.center, d->center) + d->radius);
      double sup = 0.0;
      const auto b = bounds_of(c);
      sampled_min(d->density, b.lo, b.hi, [&](Point p) { return distance(p, d->center) <= d->radius; }, &sup);
      sup_mass += sup * kPi * d->radius * d->radius;
    } else if (const auto* m = std::get_if<PointMass>(&c)) {
      s.R = std::max(s.R, distance(s.center, m->location) + std::max(m->epsilon, 0.0));
      sup_mass += m->mass;
    } else {
      const auto& poly = std::get<WeightedPolygon>(c);
      for (const Point& v : poly.vertices) s.R = std::max(s.R, distance(s.center, v));
      double sup = 0.0;
      const auto b = bounds_of(c);
      sampled_min(poly.density, b.lo, b.hi, [&](Point p) { return point_in_polygon(p, poly.vertices); }, &sup);
      sup_mass += sup * std::abs(signed_area(poly.vertices));
    }
  }
  s.outer = s.r_mu + s.R;
  if (s.r_mu > 2.0 * s.R) s.inner = s.r_mu - s.R;
  s.outer_sup = std::sqrt(sup_mass / kPi) + s.R;
  return s;
}

ScalarField rasterize(const Measure& mu_in, const Grid2D& g) {
  const Measure mu = mu_in.with_point_radius(3.0 * g.h());
  const double h = g.h();
  ScalarField out(g);
  constexpr int kSub = 4;
  for (std::size_t k = 0; k < mu.components().size(); ++k) {
    const MeasureComponent& c = mu.components()[k];
    const auto b = bounds_of(c);
    if (g.margin(b.lo) < h || g.margin(b.hi) < h) {
      std::ostringstream msg;
      msg << "measure component " << k << " support is not strictly inside the grid";
      throw Error(ErrorKind::Configuration, msg.str());
    }
    const int i0 = std::max(0, static_cast<int>(std::floor((b.lo.x - g.origin().x) / h)) - 1);
    const int i1 = std::min(g.nx() - 1, static_cast<int>(std::ceil((b.hi.x - g.origin().x) / h)) + 1);
    const int j0 = std::max(0, static_cast<int>(std::floor((b.lo.y - g.origin().y) / h)) - 1);
    const int j1 = std::min(g.ny() - 1, static_cast<int>(std::ceil((b.hi.y - g.origin().y) / h)) + 1);

    ScalarField part(g);
    double sum = 0.0;
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        const Point node = g.node(i, j);
        double acc = 0.0;
        for (int sj = 0; sj < kSub; ++sj) {
          for (int si = 0; si < kSub; ++si) {
            const Point p = node + Vec2{(si + 0.5) / kSub - 0.5, (sj + 0.5) / kSub - 0.5} * h;
            if (component_contains(c, p)) acc += component_density(c, p);
          }
        }
        part(i, j) = acc / (kSub * kSub);
        sum += part(i, j);
      }
    }
    const double exact = component_mass(c);
    const double scale = sum > 0.0 ? exact / (sum * h * h) : 0.0;
    if (sum <= 0.0) {
      throw Error(ErrorKind::Configuration,
                  "measure component " + std::to_string(k) + " is too small to be resolved on the grid");
    }
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) out(i, j) += part(i, j) * scale;
  }
  return out;
}

std::vector<std::uint8_t> support_nodes(const Measure& mu_in, const Grid2D& g) {
  const Measure mu = mu_in.with_point_radius(3.0 * g.h());
  std::vector<std::uint8_t> out(g.size(), 0);
  const auto [lo, hi] = mu.support_bounds();
  for (int j = 0; j < g.ny(); ++j) {
    const double y = g.node(0, j).y;
    if (y < lo.y || y > hi.y) continue;
    for (int i = 0; i < g.nx(); ++i) {
      const Point p = g.node(i, j);
      if (p.x < lo.x || p.x > hi.x) continue;
      if (mu.in_support(p)) out[g.index(i, j)] = 1;
    }
  }
  return out;
}

Measure1D::Measure1D(std::vector<Interval1D> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw Error(ErrorKind::Configuration, "1-D measure needs at least one interval");
  for (const Interval1D& p : pieces_) {
    if (!(p.hi > p.lo)) throw Error(ErrorKind::Configuration, "1-D interval must have hi > lo");
    if (!(p.density > 0.0)) throw Error(ErrorKind::Configuration, "1-D density must be positive");
  }
  std::sort(pieces_.begin(), pieces_.end(), [](const Interval1D& a, const Interval1D& b) { return a.lo < b.lo; });
}

double Measure1D::total_mass() const {
  double m = 0.0;
  for (const Interval1D& p : pieces_) m += p.density * (p.hi - p.lo);
  return m;
}

double Measure1D::density(double x) const {
  double rho = 0.0;
  for (const Interval1D& p : pieces_) {
    if (x >= p.lo && x < p.hi) rho += p.density;
  }
  return rho;
}

double Measure1D::support_lo() const { return pieces_.front().lo; }

double Measure1D::support_hi() const {
  double hi = pieces_.front().hi;
  for (const Interval1D& p : pieces_) hi = std::max(hi, p.hi);
  return hi;
}

}  // namespace qdomain
