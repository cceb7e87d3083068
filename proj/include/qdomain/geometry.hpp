// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDOMAIN_GEOMETRY_HPP
#define QDOMAIN_GEOMETRY_HPP

#include <cmath>
#include <span>
#include <vector>

namespace qdomain {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline Vec2 normalized(Vec2 a) {
  const double n = norm(a);
  return n > 0.0 ? a / n : Vec2{};
}
// Counterclockwise quarter turn.
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

using Point = Vec2;

double point_segment_distance(Point p, Point a, Point b);
Point closest_point_on_segment(Point p, Point a, Point b);

// Proper or touching intersection of closed segments [a,b] and [c,d].
bool segments_intersect(Point a, Point b, Point c, Point d);
// Intersection point of the supporting lines; callers check segments_intersect first.
Point segment_intersection_point(Point a, Point b, Point c, Point d);

// Closed polygon helpers; the closing edge (last -> first) is implicit.
double signed_area(std::span<const Point> polygon);
double perimeter(std::span<const Point> polygon);
bool point_in_polygon(Point p, std::span<const Point> polygon);
double distance_to_polygon(Point p, std::span<const Point> polygon);

// Symmetric Hausdorff distance between two sets of closed polylines, measured
// from each vertex set to the other set's segments.
double hausdorff_distance(const std::vector<std::vector<Point>>& a,
                          const std::vector<std::vector<Point>>& b);

// 4*pi*area / perimeter^2; equals 1 for a circle.
double isoperimetric_ratio(std::span<const Point> polygon);

}  // namespace qdomain

#endif  // QDOMAIN_GEOMETRY_HPP
