// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDOMAIN_LEVELSET_HPP
#define QDOMAIN_LEVELSET_HPP

#include <memory>
#include <utility>
#include <vector>

#include "qdomain/geometry.hpp"
#include "qdomain/grid.hpp"

namespace qdomain {

// Disc, simple polygon, or union of shapes.
class Shape {
 public:
  enum class Kind { Disc, Polygon, Union };

  static Shape disc(Point center, double radius);
  static Shape polygon(std::vector<Point> vertices);
  static Shape union_of(std::vector<Shape> parts);

  Kind kind() const { return kind_; }
  Point center() const { return center_; }
  double radius() const { return radius_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Shape>& parts() const { return parts_; }

  // Negative inside. Exact for discs and polygons, pointwise min for unions.
  double signed_distance(Point p) const;
  std::pair<Point, Point> bounds() const;
  double area() const;  // sum over parts; exact when parts are disjoint

 private:
  Kind kind_ = Kind::Disc;
  Point center_;
  double radius_ = 0.0;
  std::vector<Point> vertices_;
  std::vector<Shape> parts_;
};

// Level-set function: negative inside the domain, kept close to a signed
// distance by reinitialize().
class LevelSetFn {
 public:
  explicit LevelSetFn(ScalarField phi) : phi_(std::move(phi)) {}

  const ScalarField& phi() const { return phi_; }
  ScalarField& phi() { return phi_; }
  const Grid2D& grid() const { return phi_.grid(); }
  double operator()(Point p) const { return interpolate(phi_, p); }

  double area() const { return integrate_indicator(phi_); }
  std::vector<MarkerCurve> contour() const { return extract_contour(phi_); }

 private:
  ScalarField phi_;
};

LevelSetFn from_shape(const Shape& shape, const Grid2D& g);

// Fast-sweeping redistancing anchored on the marching-squares interface.
LevelSetFn reinitialize(const LevelSetFn& phi);

// phi - tau * v nodewise, followed by reinitialize().
LevelSetFn advance(const LevelSetFn& phi, const ScalarField& v, double tau);

// Pointwise minimum (set union).
LevelSetFn unite(const LevelSetFn& a, const LevelSetFn& b);

}  // namespace qdomain

#endif  // QDOMAIN_LEVELSET_HPP
