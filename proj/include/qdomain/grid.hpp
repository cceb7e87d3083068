// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDOMAIN_GRID_HPP
#define QDOMAIN_GRID_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "qdomain/geometry.hpp"

namespace qdomain {

// Uniform, isotropic node grid. Node (i, j) sits at origin + (i*h, j*h);
// nx and ny count nodes along x and y.
class Grid2D {
 public:
  Grid2D(Point origin, double h, int nx, int ny);

  // Smallest grid of spacing h covering [lo, hi] (both corners inclusive).
  static Grid2D covering(Point lo, Point hi, double h);

  Point origin() const { return origin_; }
  double h() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
  }
  int i_of(std::size_t n) const { return static_cast<int>(n % static_cast<std::size_t>(nx_)); }
  int j_of(std::size_t n) const { return static_cast<int>(n / static_cast<std::size_t>(nx_)); }
  Point node(int i, int j) const { return {origin_.x + i * h_, origin_.y + j * h_}; }
  Point node(std::size_t n) const { return node(i_of(n), j_of(n)); }
  Point upper() const { return node(nx_ - 1, ny_ - 1); }

  bool on_border(int i, int j) const { return i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1; }
  bool contains(Point p) const;
  // Distance from p to the nearest edge of the grid rectangle (negative outside).
  double margin(Point p) const;

  bool operator==(const Grid2D&) const = default;

 private:
  Point origin_;
  double h_;
  int nx_;
  int ny_;
};

class ScalarField {
 public:
  explicit ScalarField(const Grid2D& grid, double fill = 0.0);
  ScalarField(const Grid2D& grid, std::vector<double> values);

  template <class F>
  static ScalarField sample(const Grid2D& grid, F&& f) {
    ScalarField out(grid);
    for (int j = 0; j < grid.ny(); ++j)
      for (int i = 0; i < grid.nx(); ++i) out(i, j) = f(grid.node(i, j));
    return out;
  }

  const Grid2D& grid() const { return grid_; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
  double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
  double& operator[](std::size_t n) { return values_[n]; }
  double operator[](std::size_t n) const { return values_[n]; }

  double max_abs() const;

 private:
  Grid2D grid_;
  std::vector<double> values_;
};

// Closed polygon, implicitly closed (last vertex != first).
struct MarkerCurve {
  std::vector<Point> vertices;
};

// Bilinear interpolation; throws OutOfDomain outside the grid rectangle.
double interpolate(const ScalarField& f, Point p);

// Central-difference gradients at the four surrounding nodes, bilinearly
// blended. p must lie at least one cell inside the grid rectangle.
Vec2 gradient_at(const ScalarField& f, Point p);

// One oriented marching-squares segment. The region {phi < 0} lies to the
// left of a -> b. Edge ids identify the grid edges carrying a and b.
struct ContourSegment {
  Point a;
  Point b;
  std::size_t edge_a;
  std::size_t edge_b;
  int cell_i;
  int cell_j;
};

std::vector<ContourSegment> contour_segments(const ScalarField& phi);

// Closed zero-contour components, counterclockwise around {phi < 0}.
// Components that run into the grid border are returned open.
std::vector<MarkerCurve> extract_contour(const ScalarField& phi);

// Area of {phi < 0} with a linear smoothed Heaviside of half-width 1.5h.
double integrate_indicator(const ScalarField& phi);

// Plain-text CSV: "# nx ny h ox oy" then ny rows of nx values.
void write_csv(std::ostream& out, const ScalarField& f);
ScalarField read_scalar_field_csv(std::istream& in);
void write_csv(std::ostream& out, const MarkerCurve& curve);
MarkerCurve read_marker_curve_csv(std::istream& in);
void save_csv(const std::string& path, const ScalarField& f);
void save_csv(const std::string& path, const MarkerCurve& curve);

}  // namespace qdomain

#endif  // QDOMAIN_GRID_HPP
