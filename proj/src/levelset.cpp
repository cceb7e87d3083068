// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdomain/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qdomain/error.hpp"

namespace qdomain {

Shape Shape::disc(Point center, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::Configuration, "disc radius must be positive");
  Shape s;
  s.kind_ = Kind::Disc;
  s.center_ = center;
  s.radius_ = radius;
  return s;
}

Shape Shape::polygon(std::vector<Point> vertices) {
  if (vertices.size() < 3) throw Error(ErrorKind::Configuration, "polygon needs at least three vertices");
  if (signed_area(vertices) < 0.0) std::reverse(vertices.begin(), vertices.end());
  Shape s;
  s.kind_ = Kind::Polygon;
  s.vertices_ = std::move(vertices);
  return s;
}

Shape Shape::union_of(std::vector<Shape> parts) {
  if (parts.empty()) throw Error(ErrorKind::Configuration, "union needs at least one part");
  Shape s;
  s.kind_ = Kind::Union;
  s.parts_ = std::move(parts);
  return s;
}

double Shape::signed_distance(Point p) const {
  switch (kind_) {
    case Kind::Disc:
      return distance(p, center_) - radius_;
    case Kind::Polygon: {
      const double d = distance_to_polygon(p, vertices_);
      return point_in_polygon(p, vertices_) ? -d : d;
    }
    case Kind::Union: {
      double best = std::numeric_limits<double>::infinity();
      for (const Shape& s : parts_) best = std::min(best, s.signed_distance(p));
      return best;
    }
  }
  return 0.0;
}

std::pair<Point, Point> Shape::bounds() const {
  switch (kind_) {
    case Kind::Disc:
      return {center_ - Vec2{radius_, radius_}, center_ + Vec2{radius_, radius_}};
    case Kind::Polygon: {
      Point lo = vertices_.front(), hi = lo;
      for (const Point& v : vertices_) {
        lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
        hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
      }
      return {lo, hi};
    }
    case Kind::Union: {
      auto [lo, hi] = parts_.front().bounds();
      for (const Shape& s : parts_) {
        const auto [a, b] = s.bounds();
        lo = {std::min(lo.x, a.x), std::min(lo.y, a.y)};
        hi = {std::max(hi.x, b.x), std::max(hi.y, b.y)};
      }
      return {lo, hi};
    }
  }
  return {};
}

double Shape::area() const {
  switch (kind_) {
    case Kind::Disc: return std::numbers::pi * radius_ * radius_;
    case Kind::Polygon: return std::abs(signed_area(vertices_));
    case Kind::Union: {
      double a = 0.0;
      for (const Shape& s : parts_) a += s.area();
      return a;
    }
  }
  return 0.0;
}

LevelSetFn from_shape(const Shape& shape, const Grid2D& g) {
  const auto [lo, hi] = shape.bounds();
  if (g.margin(lo) < g.h() || g.margin(hi) < g.h()) {
    throw Error(ErrorKind::Configuration, "initial shape does not fit inside the grid");
  }
  return LevelSetFn(ScalarField::sample(g, [&](Point p) { return shape.signed_distance(p); }));
}

LevelSetFn reinitialize(const LevelSetFn& in) {
  const ScalarField& phi = in.phi();
  const Grid2D& g = phi.grid();
  const double h = g.h();
  const int nx = g.nx();
  const int ny = g.ny();
  const auto segments = contour_segments(phi);
  if (segments.empty()) {
    throw Error(ErrorKind::DegenerateState, "level set has no zero crossing (domain vanished or filled the grid)");
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> d(g.size(), kInf);
  for (const ContourSegment& s : segments) {
    for (int j = std::max(0, s.cell_j - 1); j <= std::min(ny - 1, s.cell_j + 2); ++j) {
      for (int i = std::max(0, s.cell_i - 1); i <= std::min(nx - 1, s.cell_i + 2); ++i) {
        const std::size_t n = g.index(i, j);
        d[n] = std::min(d[n], point_segment_distance(g.node(i, j), s.a, s.b));
      }
    }
  }
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (phi[n] == 0.0) d[n] = 0.0;
  }
  std::vector<std::uint8_t> fixed(g.size(), 0);
  for (std::size_t n = 0; n < g.size(); ++n) fixed[n] = d[n] <= h ? 1 : 0;

  auto update = [&](int i, int j) {
    const std::size_t n = g.index(i, j);
    if (fixed[n]) return false;
    const double a = std::min(i > 0 ? d[n - 1] : kInf, i + 1 < nx ? d[n + 1] : kInf);
    const double b = std::min(j > 0 ? d[n - nx] : kInf, j + 1 < ny ? d[n + nx] : kInf);
    if (a == kInf && b == kInf) return false;
    double cand;
    if (std::abs(a - b) >= h) {
      cand = std::min(a, b) + h;
    } else {
      cand = 0.5 * (a + b + std::sqrt(2.0 * h * h - (a - b) * (a - b)));
    }
    if (cand < d[n]) {
      d[n] = cand;
      return true;
    }
    return false;
  };

  for (int round = 0; round < 8; ++round) {
    bool changed = false;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) changed |= update(i, j);
    for (int j = 0; j < ny; ++j)
      for (int i = nx - 1; i >= 0; --i) changed |= update(i, j);
    for (int j = ny - 1; j >= 0; --j)
      for (int i = nx - 1; i >= 0; --i) changed |= update(i, j);
    for (int j = ny - 1; j >= 0; --j)
      for (int i = 0; i < nx; ++i) changed |= update(i, j);
    if (!changed) break;
  }

  ScalarField out(g);
  for (std::size_t n = 0; n < g.size(); ++n) out[n] = phi[n] < 0.0 ? -d[n] : d[n];
  return LevelSetFn(std::move(out));
}

LevelSetFn advance(const LevelSetFn& phi, const ScalarField& v, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw Error(ErrorKind::Parameter, "step tau must lie in (0, 1]");
  if (!(v.grid() == phi.grid())) throw Error(ErrorKind::Parameter, "velocity lives on a different grid");
  ScalarField next = phi.phi();
  for (std::size_t n = 0; n < next.values().size(); ++n) next[n] -= tau * v[n];
  return reinitialize(LevelSetFn(std::move(next)));
}

LevelSetFn unite(const LevelSetFn& a, const LevelSetFn& b) {
  if (!(a.grid() == b.grid())) throw Error(ErrorKind::Parameter, "level sets live on different grids");
  ScalarField out = a.phi();
  for (std::size_t n = 0; n < out.values().size(); ++n) out[n] = std::min(out[n], b.phi()[n]);
  return LevelSetFn(std::move(out));
}

}  // namespace qdomain
