// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qdomain/error.hpp"
#include "qdomain/poisson.hpp"

using namespace qdomain;

namespace {

ScalarField disc_phi(const Grid2D& g, double r) {
  return ScalarField::sample(g, [&](Point p) { return norm(p) - r; });
}

// Max nodal error of the Dirichlet solve of Delta u = 1 on B(0, 1), where
// u = (|x|^2 - 1) / 4.
double dirichlet_error(double h) {
  const Grid2D g = Grid2D::covering({-1.3, -1.3}, {1.3, 1.3}, h);
  const DomainMask mask = DomainMask::from_level_set(disc_phi(g, 1.0));
  const ScalarField u = solve_dirichlet(mask, ScalarField(g, 1.0));
  double err = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (mask.inside(n)) err = std::max(err, std::abs(u[n] - (std::pow(norm(g.node(n)), 2) - 1.0) / 4.0));
  }
  return err;
}

}  // namespace

TEST_CASE("mask of a disc") {
  const Grid2D g = Grid2D::covering({-1.2, -1.2}, {1.2, 1.2}, 0.1);
  const DomainMask m = DomainMask::from_level_set(disc_phi(g, 0.75));
  CHECK(m.inside_count() > 0);
  for (const CutEdge& c : m.cuts()) {
    CHECK(c.s > 0.0);
    CHECK(c.s <= 1.0);
    CHECK(norm(c.position) == doctest::Approx(0.75).epsilon(0.02));
    CHECK(dot(c.normal, normalized(c.position)) > 0.9);
    CHECK(m.cut_index(c.node, c.dir) >= 0);
  }

  const auto poly = DomainMask::from_polygon(g, std::vector<Point>{{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}});
  for (const CutEdge& c : poly.cuts()) CHECK(std::max(std::abs(c.position.x), std::abs(c.position.y)) == doctest::Approx(0.5));
}

TEST_CASE("domains touching the grid border are rejected") {
  const Grid2D g = Grid2D::covering({-1, -1}, {1, 1}, 0.1);
  CHECK_THROWS_AS(DomainMask::from_level_set(disc_phi(g, 1.5)), Error);
}

TEST_CASE("assembled operators are symmetric") {
  const Grid2D g = Grid2D::covering({-1.2, -1.2}, {1.2, 1.2}, 0.05);
  const DomainMask m = DomainMask::from_level_set(disc_phi(g, 0.83));
  CHECK(assemble_dirichlet(m, ScalarField(g, 1.0)).max_asymmetry() < 1e-12);
  CHECK(assemble_robin(m, ScalarField(g, 1.0), 2.0).max_asymmetry() < 1e-12);
}

TEST_CASE("Dirichlet solve converges at second order") {
  const double e1 = dirichlet_error(0.04);
  const double e2 = dirichlet_error(0.02);
  MESSAGE("Dirichlet max error h=0.04: " << e1 << ", h=0.02: " << e2);
  CHECK(e1 < 5e-3);
  CHECK(e1 / e2 > 2.5);
}

TEST_CASE("nonzero Dirichlet data") {
  const Grid2D g = Grid2D::covering({-1.3, -1.3}, {1.3, 1.3}, 0.02);
  const DomainMask m = DomainMask::from_level_set(disc_phi(g, 1.0));
  // u = x + y is harmonic.
  std::vector<double> data;
  for (const CutEdge& c : m.cuts()) data.push_back(c.position.x + c.position.y);
  const ScalarField u = solve_dirichlet(m, ScalarField(g), data);
  double err = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (m.inside(n)) err = std::max(err, std::abs(u[n] - g.node(n).x - g.node(n).y));
  }
  CHECK(err < 1e-3);
}

TEST_CASE("Robin solve on a disc") {
  // Delta u = 1 in B(0, 1), du/dn + theta u = 0: u = |x|^2 / 4 - 1 / (2 theta) - 1 / 4.
  const double theta = 2.0;
  const Grid2D g = Grid2D::covering({-1.3, -1.3}, {1.3, 1.3}, 0.02);
  const DomainMask m = DomainMask::from_level_set(disc_phi(g, 1.0));
  const ScalarField u = solve_robin(m, ScalarField(g, 1.0), theta);
  double err = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (m.inside(n)) {
      const double r = norm(g.node(n));
      err = std::max(err, std::abs(u[n] - (r * r / 4.0 - 0.5 / theta - 0.25)));
    }
  }
  CHECK(err < 0.02);
  for (double b : robin_boundary_values(m, u, theta)) CHECK(b == doctest::Approx(-0.5 / theta).epsilon(0.05));
}

TEST_CASE("conjugate gradient reports its residual history") {
  const Grid2D g = Grid2D::covering({-1.2, -1.2}, {1.2, 1.2}, 0.05);
  const DomainMask m = DomainMask::from_level_set(disc_phi(g, 1.0));
  const LinearSystem sys = assemble_dirichlet(m, ScalarField(g, 1.0));
  SolveStats stats;
  const auto x = conjugate_gradient(sys, std::vector<double>(sys.size(), 0.0), 1e-10, 0, &stats);
  CHECK(stats.relative_residual <= 1e-10);
  CHECK(x.size() == sys.size());
  try {
    conjugate_gradient(sys, std::vector<double>(sys.size(), 0.0), 1e-14, 2);
    FAIL("expected a solver error");
  } catch (const SolverError& e) {
    CHECK(e.kind() == ErrorKind::SolverFailure);
    CHECK(e.residual_history().size() >= 2);
  }
}

TEST_CASE("velocity extension") {
  const Grid2D g = Grid2D::covering({-2, -2}, {2, 2}, 0.05);
  const DomainMask m = DomainMask::from_level_set(disc_phi(g, 1.0));
  std::vector<std::uint8_t> support(g.size(), 0);
  for (std::size_t n = 0; n < g.size(); ++n) support[n] = norm(g.node(n)) < 0.3;
  const std::vector<double> speed(m.cuts().size(), 0.4);

  ExtensionReport rep;
  const ScalarField v = solve_extension(m, support, speed, ExtensionForcing::One, {}, &rep);
  for (const CutEdge& c : m.cuts()) CHECK(interpolate(v, c.position) == doctest::Approx(0.4).epsilon(0.1));
  for (std::size_t n = 0; n < g.size(); ++n) {
    CHECK(v[n] >= 0.0);
    if (!m.inside(n)) CHECK(v[n] <= 0.4 + 1e-9);  // maximum principle outside
    if (support[n]) CHECK(v[n] == 0.0);
  }
  const ScalarField v0 = solve_extension(m, support, speed, ExtensionForcing::Zero);
  // Delta v = 1 inside pulls v below the harmonic extension.
  CHECK(v[g.index(g.nx() / 2 + 12, g.ny() / 2)] < v0[g.index(g.nx() / 2 + 12, g.ny() / 2)]);
}
