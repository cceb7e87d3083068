// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdomain/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "qdomain/error.hpp"

namespace qdomain {

Grid2D::Grid2D(Point origin, double h, int nx, int ny)
    : origin_(origin), h_(h), nx_(nx), ny_(ny) {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorKind::Parameter, "grid spacing must be positive");
  if (nx < 3 || ny < 3) throw Error(ErrorKind::Parameter, "grid needs at least 3 nodes per direction");
}

Grid2D Grid2D::covering(Point lo, Point hi, double h) {
  const int nx = static_cast<int>(std::ceil((hi.x - lo.x) / h - 1e-9)) + 1;
  const int ny = static_cast<int>(std::ceil((hi.y - lo.y) / h - 1e-9)) + 1;
  return Grid2D(lo, h, std::max(nx, 3), std::max(ny, 3));
}

bool Grid2D::contains(Point p) const { return margin(p) >= -1e-12 * h_; }

double Grid2D::margin(Point p) const {
  const Point hi = upper();
  return std::min({p.x - origin_.x, hi.x - p.x, p.y - origin_.y, hi.y - p.y});
}

ScalarField::ScalarField(const Grid2D& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(const Grid2D& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorKind::Parameter, "scalar field size does not match its grid");
  }
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

struct CellCoord {
  int i;
  int j;
  double tx;
  double ty;
};

CellCoord locate(const Grid2D& g, Point p) {
  const double fx = (p.x - g.origin().x) / g.h();
  const double fy = (p.y - g.origin().y) / g.h();
  const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, g.nx() - 2);
  const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, g.ny() - 2);
  return {i, j, fx - i, fy - j};
}

double blend(double v00, double v10, double v01, double v11, double tx, double ty) {
  return (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11);
}

}  // namespace

double interpolate(const ScalarField& f, Point p) {
  const Grid2D& g = f.grid();
  if (!g.contains(p)) {
    std::ostringstream msg;
    msg << "interpolation point (" << p.x << ", " << p.y << ") lies outside the grid";
    throw Error(ErrorKind::OutOfDomain, msg.str());
  }
  const CellCoord c = locate(g, p);
  return blend(f(c.i, c.j), f(c.i + 1, c.j), f(c.i, c.j + 1), f(c.i + 1, c.j + 1), c.tx, c.ty);
}

Vec2 gradient_at(const ScalarField& f, Point p) {
  const Grid2D& g = f.grid();
  if (g.margin(p) < g.h() * (1.0 - 1e-9)) {
    std::ostringstream msg;
    msg << "gradient point (" << p.x << ", " << p.y << ") is within one cell of the grid edge";
    throw Error(ErrorKind::OutOfDomain, msg.str());
  }
  const CellCoord c = locate(g, p);
  const double inv2h = 0.5 / g.h();
  auto gx = [&](int i, int j) { return (f(i + 1, j) - f(i - 1, j)) * inv2h; };
  auto gy = [&](int i, int j) { return (f(i, j + 1) - f(i, j - 1)) * inv2h; };
  const int i = c.i;
  const int j = c.j;
  return {blend(gx(i, j), gx(i + 1, j), gx(i, j + 1), gx(i + 1, j + 1), c.tx, c.ty),
          blend(gy(i, j), gy(i + 1, j), gy(i, j + 1), gy(i + 1, j + 1), c.tx, c.ty)};
}

namespace {

std::size_t horizontal_edge(const Grid2D& g, int i, int j) { return 2 * g.index(i, j); }
std::size_t vertical_edge(const Grid2D& g, int i, int j) { return 2 * g.index(i, j) + 1; }

// Zero crossing on the edge between an inside node a and an outside node b.
Point crossing(Point a, double phi_a, Point b, double phi_b) {
  const double s = phi_a / (phi_a - phi_b);
  return a + (b - a) * s;
}

}  // namespace

std::vector<ContourSegment> contour_segments(const ScalarField& phi) {
  const Grid2D& g = phi.grid();
  std::vector<ContourSegment> out;

  struct Crossing {
    Point p;
    std::size_t edge;
    bool exit;
  };

  for (int cj = 0; cj + 1 < g.ny(); ++cj) {
    for (int ci = 0; ci + 1 < g.nx(); ++ci) {
      // Corners in counterclockwise order; edge k joins corner k and k+1.
      const std::array<std::pair<int, int>, 4> corner{{{ci, cj}, {ci + 1, cj}, {ci + 1, cj + 1}, {ci, cj + 1}}};
      std::array<double, 4> v{};
      std::array<bool, 4> in{};
      int n_in = 0;
      for (int k = 0; k < 4; ++k) {
        v[k] = phi(corner[k].first, corner[k].second);
        in[k] = v[k] < 0.0;
        n_in += in[k] ? 1 : 0;
      }
      if (n_in == 0 || n_in == 4) continue;

      const std::array<std::size_t, 4> edge_id{horizontal_edge(g, ci, cj), vertical_edge(g, ci + 1, cj),
                                               horizontal_edge(g, ci, cj + 1), vertical_edge(g, ci, cj)};
      std::array<Crossing, 4> xs{};
      int nx = 0;
      for (int k = 0; k < 4; ++k) {
        const int k1 = (k + 1) % 4;
        if (in[k] == in[k1]) continue;
        const Point pk = g.node(corner[k].first, corner[k].second);
        const Point pk1 = g.node(corner[k1].first, corner[k1].second);
        const Point p = in[k] ? crossing(pk, v[k], pk1, v[k1]) : crossing(pk1, v[k1], pk, v[k]);
        xs[nx++] = Crossing{p, edge_id[k], in[k]};
      }

      auto emit = [&](const Crossing& from, const Crossing& to) {
        out.push_back(ContourSegment{from.p, to.p, from.edge, to.edge, ci, cj});
      };
      if (nx == 2) {
        if (xs[0].exit) emit(xs[0], xs[1]);
        else emit(xs[1], xs[0]);
      } else {
        // Saddle: the sign of the cell-centre average decides connectivity.
        const bool centre_inside = 0.25 * (v[0] + v[1] + v[2] + v[3]) < 0.0;
        for (int m = 0; m < 4; ++m) {
          if (!xs[m].exit) continue;
          emit(xs[m], xs[centre_inside ? (m + 1) % 4 : (m + 3) % 4]);
        }
      }
    }
  }
  return out;
}

namespace {

void drop_repeated_vertices(std::vector<Point>& v, bool closed) {
  std::vector<Point> out;
  out.reserve(v.size());
  for (const Point& p : v) {
    if (out.empty() || distance(out.back(), p) > 1e-14) out.push_back(p);
  }
  if (closed && out.size() > 1 && distance(out.front(), out.back()) <= 1e-14) out.pop_back();
  v = std::move(out);
}

}  // namespace

std::vector<MarkerCurve> extract_contour(const ScalarField& phi) {
  const std::vector<ContourSegment> segs = contour_segments(phi);
  std::unordered_map<std::size_t, std::size_t> starting_at;
  std::unordered_map<std::size_t, std::size_t> ending_at;
  starting_at.reserve(segs.size());
  ending_at.reserve(segs.size());
  for (std::size_t s = 0; s < segs.size(); ++s) {
    starting_at.emplace(segs[s].edge_a, s);
    ending_at.emplace(segs[s].edge_b, s);
  }

  std::vector<bool> used(segs.size(), false);
  std::vector<MarkerCurve> curves;

  auto trace = [&](std::size_t first, bool closed) {
    MarkerCurve c;
    std::size_t s = first;
    while (true) {
      used[s] = true;
      c.vertices.push_back(segs[s].a);
      const auto it = starting_at.find(segs[s].edge_b);
      if (it == starting_at.end()) {
        c.vertices.push_back(segs[s].b);
        break;
      }
      s = it->second;
      if (used[s]) break;
    }
    drop_repeated_vertices(c.vertices, closed);
    if (c.vertices.size() >= 3 || (!closed && c.vertices.size() >= 2)) curves.push_back(std::move(c));
  };

  // Open chains start at an edge that no segment ends on (grid border).
  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (!used[s] && !ending_at.contains(segs[s].edge_a)) trace(s, false);
  }
  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (!used[s]) trace(s, true);
  }
  return curves;
}

double integrate_indicator(const ScalarField& phi) {
  const double h = phi.grid().h();
  const double eps = 1.5 * h;
  double total = 0.0;
  for (double v : phi.values()) {
    total += std::clamp(0.5 - v / (2.0 * eps), 0.0, 1.0);
  }
  return total * h * h;
}

void write_csv(std::ostream& out, const ScalarField& f) {
  const Grid2D& g = f.grid();
  out << std::setprecision(17);
  out << "# " << g.nx() << ' ' << g.ny() << ' ' << g.h() << ' ' << g.origin().x << ' ' << g.origin().y << '\n';
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (i) out << ',';
      out << f(i, j);
    }
    out << '\n';
  }
}

ScalarField read_scalar_field_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.empty() || line[0] != '#') {
    throw Error(ErrorKind::Io, "scalar field CSV: missing '# nx ny h ox oy' header");
  }
  std::istringstream header(line.substr(1));
  int nx = 0, ny = 0;
  double h = 0.0, ox = 0.0, oy = 0.0;
  if (!(header >> nx >> ny >> h >> ox >> oy)) throw Error(ErrorKind::Io, "scalar field CSV: malformed header");
  Grid2D grid({ox, oy}, h, nx, ny);
  std::vector<double> values;
  values.reserve(grid.size());
  for (int j = 0; j < ny; ++j) {
    if (!std::getline(in, line)) throw Error(ErrorKind::Io, "scalar field CSV: too few rows");
    std::istringstream row(line);
    std::string cell;
    int count = 0;
    while (std::getline(row, cell, ',')) {
      values.push_back(std::stod(cell));
      ++count;
    }
    if (count != nx) throw Error(ErrorKind::Io, "scalar field CSV: row " + std::to_string(j) + " has wrong length");
  }
  return ScalarField(grid, std::move(values));
}

void write_csv(std::ostream& out, const MarkerCurve& curve) {
  out << std::setprecision(17);
  for (const Point& p : curve.vertices) out << p.x << ',' << p.y << '\n';
}

MarkerCurve read_marker_curve_csv(std::istream& in) {
  MarkerCurve c;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorKind::Io, "marker CSV: expected 'x,y' rows");
    c.vertices.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  return c;
}

namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

void save_csv(const std::string& path, const ScalarField& f) {
  auto out = open_for_write(path);
  write_csv(out, f);
}

void save_csv(const std::string& path, const MarkerCurve& curve) {
  auto out = open_for_write(path);
  write_csv(out, curve);
}

}  // namespace qdomain
