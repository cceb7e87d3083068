// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qdomain/error.hpp"
#include "qdomain/measure.hpp"

using namespace qdomain;
using std::numbers::pi;

namespace {

const std::vector<Point> kPolygon{{-0.6, -0.4}, {0.5, -0.5}, {0.6, 0.2}, {0.1, 0.05}, {0.0, 0.5}, {-0.5, 0.4}};

double sum(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s;
}

}  // namespace

TEST_CASE("polynomial moments over discs") {
  CHECK(integrate_over_disc(Polynomial::constant(2.0), {1, 1}, 0.5) == doctest::Approx(2.0 * pi * 0.25));
  CHECK(integrate_over_disc(Polynomial({{1, 2, 0}}), {0, 0}, 1.0) == doctest::Approx(pi / 4));
  // x^2 about an off-centre disc: (c^2 + r^2/4) * area.
  CHECK(integrate_over_disc(Polynomial({{1, 2, 0}}), {2, 0}, 1.0) == doctest::Approx(pi * 4.25));
  CHECK(integrate_over_disc(Polynomial({{1, 1, 1}}), {0, 0}, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("polynomial moments over triangles and polygons") {
  CHECK(integrate_over_triangle(Polynomial::constant(1.0), {0, 0}, {1, 0}, {0, 1}) == doctest::Approx(0.5));
  CHECK(integrate_over_triangle(Polynomial::constant(1.0), {0, 0}, {0, 1}, {1, 0}) == doctest::Approx(-0.5));
  CHECK(integrate_over_triangle(Polynomial({{1, 1, 0}}), {0, 0}, {1, 0}, {0, 1}) == doctest::Approx(1.0 / 6));
  const std::vector<Point> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(integrate_over_polygon(Polynomial({{1, 2, 0}}), square) == doctest::Approx(1.0 / 3));
  CHECK(integrate_over_polygon(Polynomial({{1, 2, 2}}), square) == doctest::Approx(1.0 / 9));
}

TEST_CASE("masses and centroid") {
  const Measure weighted({UniformDisc{{0, 0}, 1.0, Polynomial({{1, 0, 0}, {2, 2, 0}, {1, 0, 2}})}});
  CHECK(total_mass(weighted) == doctest::Approx(1.75 * pi));

  const Measure poly({WeightedPolygon{kPolygon, Polynomial::constant(1.5)}});
  CHECK(total_mass(poly) == doctest::Approx(1.5 * 0.825));

  const Measure pair({UniformDisc{{-1, 0}, 0.5, Polynomial::constant(1.0)}, PointMass{{2, 0}, pi * 0.25, 0.1}});
  CHECK(total_mass(pair) == doctest::Approx(pi * 0.5));
  CHECK(mass_centroid(pair).x == doctest::Approx(0.5));
}

TEST_CASE("construction rejects invalid components") {
  CHECK_THROWS_AS(Measure({}), Error);
  CHECK_THROWS_AS(Measure({UniformDisc{{0, 0}, -1.0}}), Error);
  CHECK_THROWS_AS(Measure({UniformDisc{{0, 0}, 1.0, Polynomial::constant(-2.0)}}), Error);
  CHECK_THROWS_AS(Measure({PointMass{{0, 0}, -1.0}}), Error);
  CHECK_THROWS_AS(Measure({WeightedPolygon{{{0, 0}, {1, 0}}}}), Error);
}

TEST_CASE("clockwise polygons are normalised") {
  std::vector<Point> cw(kPolygon.rbegin(), kPolygon.rend());
  const Measure m({WeightedPolygon{cw, Polynomial::constant(1.0)}});
  CHECK(signed_area(std::get<WeightedPolygon>(m.components()[0]).vertices) > 0.0);
  CHECK(total_mass(m) == doctest::Approx(0.825));
}

TEST_CASE("Sakai radii") {
  const Measure mu({UniformDisc{{0.5, -0.5}, 0.5, Polynomial::constant(16.0)}});
  const SakaiRadii s = sakai_radii(mu);
  CHECK(s.center.x == doctest::Approx(0.5));
  CHECK(s.r_mu == doctest::Approx(2.0));
  CHECK(s.R == doctest::Approx(0.5));
  CHECK(s.outer == doctest::Approx(2.5));
  REQUIRE(s.inner.has_value());
  CHECK(*s.inner == doctest::Approx(1.5));

  // Sup-based bound for a varying density.
  const Measure weighted({UniformDisc{{0, 0}, 1.0, Polynomial({{1, 0, 0}, {2, 2, 0}, {1, 0, 2}})}});
  const SakaiRadii w = sakai_radii(weighted);
  CHECK(w.outer_sup == doctest::Approx(std::sqrt(3.0) + 1.0));
  CHECK_FALSE(w.inner.has_value());
}

TEST_CASE("rasterization reproduces every component mass") {
  const Grid2D g = Grid2D::covering({-1.5, -1.5}, {1.5, 1.5}, 0.05);
  const Measure mu({UniformDisc{{-0.4, 0.3}, 0.37, Polynomial({{1, 0, 0}, {1, 1, 0}})},
                    WeightedPolygon{kPolygon, Polynomial::constant(2.0)}, PointMass{{0.9, 0.9}, 0.3}});
  const ScalarField rho = rasterize(mu, g);
  CHECK(sum(rho) * g.h() * g.h() == doctest::Approx(total_mass(mu)).epsilon(1e-9));
  for (double v : rho.values()) CHECK(v >= 0.0);

  const auto nodes = support_nodes(mu, g);
  CHECK(nodes[g.index(g.nx() / 2, g.ny() / 2)] != 0);  // origin lies inside the polygon
  CHECK(nodes[0] == 0);

  SUBCASE("support must stay one cell inside the grid") {
    const Measure edge({UniformDisc{{1.45, 0}, 0.1, Polynomial::constant(1.0)}});
    CHECK_THROWS_AS(rasterize(edge, g), Error);
  }
}

TEST_CASE("unresolved point masses take the requested radius") {
  const Measure mu({PointMass{{0, 0}, 1.0}});
  const Measure resolved = mu.with_point_radius(0.06);
  CHECK(std::get<PointMass>(resolved.components()[0]).epsilon == doctest::Approx(0.06));
  CHECK(mu.scaled(3.0).components().size() == 1);
  CHECK(total_mass(mu.scaled(3.0)) == doctest::Approx(3.0));
}

TEST_CASE("one-dimensional measure") {
  const Measure1D mu({{-0.5, 0.5, 3.0}, {1.0, 2.0, 1.0}});
  CHECK(mu.total_mass() == doctest::Approx(4.0));
  CHECK(mu.density(0.0) == doctest::Approx(3.0));
  CHECK(mu.density(0.75) == doctest::Approx(0.0));
  CHECK(mu.support_lo() == doctest::Approx(-0.5));
  CHECK(mu.support_hi() == doctest::Approx(2.0));
}
