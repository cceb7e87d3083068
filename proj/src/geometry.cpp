// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdomain/geometry.hpp"
#include "qdomain/error.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace qdomain {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::Configuration: return "configuration";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Geometry: return "geometry";
    case ErrorKind::DegenerateState: return "degenerate-state";
    case ErrorKind::SolverFailure: return "solver-failure";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::StepTooLarge: return "step-too-large";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::Invariant: return "invariant";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Point closest_point_on_segment(Point p, Point a, Point b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + ab * t;
}

double point_segment_distance(Point p, Point a, Point b) {
  return distance(p, closest_point_on_segment(p, a, b));
}

namespace {

int orientation_sign(Point a, Point b, Point c) {
  const double v = cross(b - a, c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

bool on_segment(Point a, Point b, Point p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(Point a, Point b, Point c, Point d) {
  const int o1 = orientation_sign(a, b, c);
  const int o2 = orientation_sign(a, b, d);
  const int o3 = orientation_sign(c, d, a);
  const int o4 = orientation_sign(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

Point segment_intersection_point(Point a, Point b, Point c, Point d) {
  const Vec2 r = b - a;
  const Vec2 s = d - c;
  const double denom = cross(r, s);
  if (denom == 0.0) return (a + b + c + d) * 0.25;
  const double t = cross(c - a, s) / denom;
  return a + r * t;
}

double signed_area(std::span<const Point> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(polygon[i], polygon[(i + 1) % n]);
  }
  return 0.5 * twice;
}

double perimeter(std::span<const Point> polygon) {
  const std::size_t n = polygon.size();
  if (n < 2) return 0.0;
  double len = 0.0;
  for (std::size_t i = 0; i < n; ++i) len += distance(polygon[i], polygon[(i + 1) % n]);
  return len;
}

bool point_in_polygon(Point p, std::span<const Point> polygon) {
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = polygon[i];
    const Point& b = polygon[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < xint) inside = !inside;
    }
  }
  return inside;
}

double distance_to_polygon(Point p, std::span<const Point> polygon) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(p, polygon[i], polygon[(i + 1) % n]));
  }
  return best;
}

namespace {

double directed_hausdorff(const std::vector<std::vector<Point>>& from,
                          const std::vector<std::vector<Point>>& to) {
  double worst = 0.0;
  for (const auto& curve : from) {
    for (const Point& p : curve) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& other : to) best = std::min(best, distance_to_polygon(p, other));
      worst = std::max(worst, best);
    }
  }
  return worst;
}

}  // namespace

double hausdorff_distance(const std::vector<std::vector<Point>>& a,
                          const std::vector<std::vector<Point>>& b) {
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double isoperimetric_ratio(std::span<const Point> polygon) {
  const double len = perimeter(polygon);
  if (len == 0.0) return 0.0;
  return 4.0 * std::numbers::pi * std::abs(signed_area(polygon)) / (len * len);
}

}  // namespace qdomain
