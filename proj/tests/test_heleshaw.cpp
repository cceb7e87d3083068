// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qdomain/heleshaw.hpp"

using namespace qdomain;
using std::numbers::pi;

namespace {

HeleShawRun injection(std::vector<double> times) {
  HeleShawRun run{Shape::disc({0, 0}, 0.5), Measure({PointMass{{0, 0}, 1.0}}), std::move(times), {}, 0.0};
  return run;
}

const Grid2D& coarse() {
  static const Grid2D g = Grid2D::covering({-1.5, -1.5}, {1.5, 1.5}, 0.04);
  return g;
}

}  // namespace

TEST_CASE("time-dependent measure") {
  const HeleShawRun run = injection({1.0});
  CHECK(total_mass(heleshaw_measure(run, 0.0)) == doctest::Approx(pi * 0.25));
  CHECK(total_mass(heleshaw_measure(run, 2.0)) == doctest::Approx(pi * 0.25 + 2.0));
  CHECK_THROWS_AS(heleshaw_measure(run, -1.0), Error);

  HeleShawRun bare = run;
  bare.d0.reset();
  CHECK_THROWS_AS(heleshaw_measure(bare, 0.0), Error);

  HeleShawRun overlapping = run;
  overlapping.d0 = Shape::union_of({Shape::disc({0, 0}, 0.5), Shape::disc({0.6, 0}, 0.5)});
  CHECK_THROWS_AS(heleshaw_measure(overlapping, 1.0), Error);

  HeleShawRun apart = run;
  apart.d0 = Shape::union_of({Shape::disc({-0.6, 0}, 0.5), Shape::disc({0.6, 0}, 0.5)});
  CHECK(heleshaw_measure(apart, 1.0).components().size() == 3);
}

TEST_CASE("time zero returns the initial domain") {
  const HeleShawStep s = heleshaw_step(injection({0.0}), coarse(), 0.0);
  CHECK(s.d_t.area() == doctest::Approx(pi * 0.25).epsilon(0.01));
  CHECK(s.u_t.max_abs() == 0.0);
  CHECK(s.components == 1);
}

TEST_CASE("radial injection grows by the area law") {
  const HeleShawResult res = heleshaw_run(injection({0.5, 1.0}), coarse());
  REQUIRE(res.steps.size() == 2);
  for (const HeleShawStep& s : res.steps) {
    const double radius = std::sqrt(0.25 + s.t / pi);
    CHECK(s.mass_defect <= 0.02);
    CHECK(s.min_u >= -coarse().h());
    for (const MarkerCurve& c : s.d_t.contour()) {
      for (Point p : c.vertices) CHECK(std::abs(norm(p) - radius) <= 2.0 * coarse().h());
    }
  }
  REQUIRE(res.monotonicity.size() == 1);
  CHECK(res.monotone());
}

TEST_CASE("repeated times give identical domains") {
  const HeleShawResult res = heleshaw_run(injection({0.5, 0.5}), coarse());
  CHECK(res.monotonicity.front().max_excess <= coarse().h());
  const HeleShawResult par = heleshaw_run(injection({0.5, 0.5}), coarse(), true);
  CHECK(par.steps.size() == 2);
  CHECK(par.monotone());
}

TEST_CASE("times must be non-decreasing") {
  CHECK_THROWS_AS(heleshaw_run(injection({1.0, 0.5}), coarse()), Error);
  CHECK_THROWS_AS(heleshaw_run(injection({}), coarse()), Error);
}
