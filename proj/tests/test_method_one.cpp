// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "qdomain/method_one.hpp"
#include "qdomain/oracle.hpp"

using namespace qdomain;

TEST_CASE("theta update") {
  CHECK(theta_update(2.0) == doctest::Approx(1.0));
  CHECK(theta_update(0.5) == doctest::Approx(2.0));
  CHECK(theta_update(0.0) == 0.0);
  CHECK(theta_update(-1.0) == 0.0);
}

TEST_CASE("configuration validation") {
  MethodOneConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.zeta == doctest::Approx(2.0 - std::sqrt(2.0)));
  c.tau = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.theta_iters = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.tol = -1.0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("support level set") {
  const Grid2D g = Grid2D::covering({-1.5, -1.5}, {1.5, 1.5}, 0.02);
  const Measure mu({UniformDisc{{0.2, 0}, 0.5, Polynomial::constant(4.0)}, PointMass{{-0.8, 0}, 0.1}});
  const LevelSetFn phi = support_level_set(mu, g, 0.1);
  CHECK(phi({0.8, 0.0}) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(phi({-0.8, 0.16}) == doctest::Approx(0.0).epsilon(1e-9));  // epsilon resolves to 3h
  CHECK_THROWS_AS(support_level_set(mu, g, -0.1), Error);
  CHECK_THROWS_AS(support_level_set(mu, g, 0.8), Error);
}

TEST_CASE("radial instance on a coarse grid") {
  const Measure mu({UniformDisc{{0, 0}, 0.5, Polynomial::constant(4.0)}});
  const Grid2D g = Grid2D::covering({-1.6, -1.6}, {1.6, 1.6}, 0.04);
  std::vector<IterationReport> seen;
  const MethodOneResult res = run_method_one(mu, from_shape(Shape::disc({0, 0}, 0.6), g), {},
                                             [&](const IterationReport& r) { seen.push_back(r); });
  CHECK(res.converged);
  CHECK(seen.size() == res.reports.size());
  CHECK(res.iterations() == res.reports.back().k);
  CHECK(res.reports.back().sup_boundary_u < 1e-4);
  CHECK(mass_identity_defect(res.phi, mu) <= 0.02);
  for (const MarkerCurve& c : res.phi.contour()) {
    for (Point p : c.vertices) CHECK(std::abs(norm(p) - 1.0) <= 2.0 * g.h());
  }
}

TEST_CASE("iteration budget exhaustion keeps the partial result") {
  const Measure mu({UniformDisc{{0, 0}, 0.5, Polynomial::constant(4.0)}});
  const Grid2D g = Grid2D::covering({-1.6, -1.6}, {1.6, 1.6}, 0.05);
  MethodOneConfig cfg;
  cfg.max_iters = 1;
  try {
    run_method_one(mu, from_shape(Shape::disc({0, 0}, 0.55), g), cfg);
    FAIL("expected non-convergence");
  } catch (const MethodOneFailure& f) {
    CHECK(f.kind() == ErrorKind::NonConvergence);
    CHECK_FALSE(f.partial().converged);
    CHECK(f.partial().reports.size() == 2);
  }
}

TEST_CASE("support must start inside the domain") {
  const Measure mu({UniformDisc{{0, 0}, 0.5, Polynomial::constant(4.0)}});
  const Grid2D g = Grid2D::covering({-1.6, -1.6}, {1.6, 1.6}, 0.05);
  CHECK_THROWS_AS(run_method_one(mu, from_shape(Shape::disc({0, 0}, 0.3), g), {}), Error);
}

TEST_CASE("one-dimensional shooting") {
  const Measure1D mu({{-0.5, 0.5, 3.0}});
  const OneDimResult r = run_1d(mu, -0.5, 0.5);
  CHECK(r.c_f == doctest::Approx(-1.5).epsilon(1e-9));
  CHECK(r.d_f == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(r.u_c == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.x.size() == 201);

  // Asymmetric start still lands on the same free boundary.
  const OneDimResult s = run_1d(mu, -0.7, 0.5);
  CHECK(s.c_f == doctest::Approx(-1.5).epsilon(1e-9));
  CHECK(s.d_f == doctest::Approx(1.5).epsilon(1e-9));

  CHECK_THROWS_AS(run_1d(mu, -0.4, 0.5), Error);   // does not contain the support
  CHECK_THROWS_AS(run_1d(mu, -3.0, 3.0), Error);   // too far from the support
}
