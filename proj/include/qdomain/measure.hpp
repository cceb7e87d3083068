// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDOMAIN_MEASURE_HPP
#define QDOMAIN_MEASURE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "qdomain/geometry.hpp"
#include "qdomain/grid.hpp"

namespace qdomain {

struct Monomial {
  double coeff = 0.0;
  int px = 0;
  int py = 0;
};

// Sum of coeff * x^px * y^py in absolute coordinates.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Monomial> terms);
  static Polynomial constant(double c) { return Polynomial({Monomial{c, 0, 0}}); }

  double operator()(Point p) const;
  const std::vector<Monomial>& terms() const { return terms_; }
  int degree() const;
  bool is_constant() const { return degree() == 0; }
  Polynomial scaled(double s) const;
  Polynomial times_monomial(int px, int py) const;

 private:
  std::vector<Monomial> terms_;
};

// Exact integrals of a polynomial. The triangle integral is signed by the
// orientation of (a, b, c).
double integrate_over_disc(const Polynomial& g, Point center, double radius);
double integrate_over_triangle(const Polynomial& g, Point a, Point b, Point c);
double integrate_over_polygon(const Polynomial& g, std::span<const Point> polygon);

struct UniformDisc {
  Point center;
  double radius = 0.0;
  Polynomial density = Polynomial::constant(1.0);
};

struct WeightedPolygon {
  std::vector<Point> vertices;
  Polynomial density = Polynomial::constant(1.0);
};

// Dirac mass smoothed to the uniform disc of radius epsilon and density
// mass / (pi epsilon^2). epsilon <= 0 means "resolve to 3h on rasterization".
struct PointMass {
  Point location;
  double mass = 0.0;
  double epsilon = 0.0;
};

using MeasureComponent = std::variant<UniformDisc, WeightedPolygon, PointMass>;

// Finite positive measure; overlapping components add their densities.
class Measure {
 public:
  explicit Measure(std::vector<MeasureComponent> components);

  const std::vector<MeasureComponent>& components() const { return components_; }
  Measure scaled(double t) const;
  Measure plus(const Measure& other) const;
  // Copy with every unresolved point-mass radius set to epsilon.
  Measure with_point_radius(double epsilon) const;

  bool in_support(Point p) const;
  // Axis-aligned bounding box of the support.
  std::pair<Point, Point> support_bounds() const;

 private:
  std::vector<MeasureComponent> components_;
};

double component_mass(const MeasureComponent& c);
double total_mass(const Measure& mu);
Point mass_centroid(const Measure& mu);

struct SakaiRadii {
  Point center;                // mass centroid; all balls below are centred here
  double r_mu = 0.0;           // |B_{r_mu}| = total mass
  double R = 0.0;              // smallest centred radius containing every support
  double outer = 0.0;          // r_mu + R
  std::optional<double> inner; // r_mu - R, present only when r_mu > 2R
  double outer_sup = 0.0;      // same bound with each density replaced by its sup
};

SakaiRadii sakai_radii(const Measure& mu);

// Nodal density on g with 4x4 area-fraction subsampling per node cell; each
// component is renormalised so that h^2 * sum reproduces its exact mass.
ScalarField rasterize(const Measure& mu, const Grid2D& g);

// Nodes lying inside the (smoothed) support.
std::vector<std::uint8_t> support_nodes(const Measure& mu, const Grid2D& g);

// Piecewise-constant measure on the line: density on each [lo, hi].
struct Interval1D {
  double lo = 0.0;
  double hi = 0.0;
  double density = 0.0;
};

class Measure1D {
 public:
  explicit Measure1D(std::vector<Interval1D> pieces);

  const std::vector<Interval1D>& pieces() const { return pieces_; }
  double total_mass() const;
  double density(double x) const;
  double support_lo() const;
  double support_hi() const;

 private:
  std::vector<Interval1D> pieces_;
};

}  // namespace qdomain

#endif  // QDOMAIN_MEASURE_HPP
