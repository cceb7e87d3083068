// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qdomain/error.hpp"
#include "qdomain/oracle.hpp"

using namespace qdomain;

TEST_CASE("radial solution matches across both breakpoints") {
  for (int n : {1, 2}) {
    for (double M : {1.5, 4.0, 16.0}) {
      const RadialCase c{{0, 0}, 0.5, M, n};
      const double r = c.r();
      CHECK(r == doctest::Approx(std::pow(M, 1.0 / n) * 0.5));
      const double e = 1e-14;
      CHECK(std::abs(radial_u(c, c.a - e) - radial_u(c, c.a + e)) < 1e-12);
      CHECK(std::abs(radial_du(c, c.a - e) - radial_du(c, c.a + e)) < 1e-12);
      CHECK(std::abs(radial_u(c, r)) < 1e-12);
      CHECK(std::abs(radial_du(c, r)) < 1e-12);
      CHECK(std::abs(radial_u(c, r - e)) < 1e-12);
      CHECK(radial_u(c, 0.0) > 0.0);
      CHECK(radial_u(c, r + 0.1) == 0.0);
    }
  }
}

TEST_CASE("pinned two-dimensional constants") {
  const RadialCase c{{0, 0}, 0.5, 4.0, 2};
  // u(0) = (r^2 / 2) log(r / a) with r = 1, a = 1/2.
  CHECK(radial_u(c, 0.0) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-14));
  CHECK(radial_u(c, 0.75) == doctest::Approx((0.5625 - 1.0) / 4.0 + 0.5 * std::log(1.0 / 0.75)).epsilon(1e-14));

  // The literal inner constant (r^2 - M a) / (2 (2 - N)) has a zero denominator
  // in two dimensions and the wrong units in one; log both against the values
  // obtained from C^1 matching.
  const RadialCase one{{0, 0}, 0.5, 4.0, 1};
  const double literal_1d = (one.r() * one.r() - one.M * one.a) / 2.0;
  MESSAGE("N=1 inner constant: literal " << literal_1d << ", matched " << radial_u(one, 0.0));
  MESSAGE("N=2 inner constant: literal undefined (division by 2 - N = 0), matched " << radial_u(c, 0.0));
  CHECK(radial_u(one, 0.0) == doctest::Approx(one.M * (one.M - 1.0) * one.a * one.a / 2.0));
}

TEST_CASE("radial solution satisfies the PDE away from the breakpoints") {
  const RadialCase c{{0.1, -0.2}, 0.5, 4.0, 2};
  const double h = 1e-3;
  for (Point p : {Point{0.2, -0.1}, Point{0.8, 0.1}, Point{-0.3, -0.7}}) {
    const double lap = (radial_u(c, p + Vec2{h, 0}) + radial_u(c, p - Vec2{h, 0}) + radial_u(c, p + Vec2{0, h}) +
                        radial_u(c, p - Vec2{0, h}) - 4.0 * radial_u(c, p)) /
                       (h * h);
    const double expected = distance(p, c.center) < c.a ? 1.0 - c.M : 1.0;
    CHECK(lap == doctest::Approx(expected).epsilon(1e-4));
  }
  const Vec2 g = radial_gradient(c, {0.8, -0.2});
  CHECK(g.x == doctest::Approx(radial_du(c, 0.7)));
  CHECK(g.y == doctest::Approx(0.0));
}

TEST_CASE("invalid radial parameters") {
  CHECK_THROWS_AS(RadialCase({{0, 0}, 0.5, 1.0, 2}).r(), Error);
  CHECK_THROWS_AS(RadialCase({{0, 0}, 0.5, 4.0, 3}).r(), Error);
  CHECK_THROWS_AS(radial_u(RadialCase{{0, 0}, -1.0, 4.0, 2}, 0.1), Error);
}

TEST_CASE("point mass domains") {
  CHECK(point_mass_domain(std::numbers::pi, 2) == doctest::Approx(1.0));
  CHECK(point_mass_domain(3.0, 1) == doctest::Approx(1.5));
  CHECK_THROWS_AS(point_mass_domain(0.0, 2), Error);
  // Shrinking the support at fixed mass leaves the domain unchanged.
  for (double a : {0.5, 0.1, 0.01}) {
    const RadialCase c{{0, 0}, a, 1.0 / (std::numbers::pi * a * a), 2};
    CHECK(c.r() == doctest::Approx(point_mass_domain(1.0, 2)));
  }
}

TEST_CASE("mass identity defect") {
  const Measure mu({UniformDisc{{0, 0}, 0.5, Polynomial::constant(4.0)}});
  CHECK(mass_identity_defect(std::numbers::pi, mu) == doctest::Approx(0.0));
  CHECK(mass_identity_defect(1.1 * std::numbers::pi, mu) == doctest::Approx(0.1));
}
