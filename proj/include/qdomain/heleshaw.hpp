// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDOMAIN_HELESHAW_HPP
#define QDOMAIN_HELESHAW_HPP

#include <optional>
#include <vector>

#include "qdomain/levelset.hpp"
#include "qdomain/measure.hpp"
#include "qdomain/method_one.hpp"

namespace qdomain {

struct HeleShawRun {
  std::optional<Shape> d0;  // empty: pure growth from the injection measure
  Measure nu;
  std::vector<double> times;
  MethodOneConfig solver;
  double initial_offset = 0.0;  // cold-start domain = supp(mu_t) grown by this
};

struct HeleShawStep {
  double t = 0.0;
  LevelSetFn d_t;
  ScalarField u_t;
  std::vector<IterationReport> reports;
  double mass_defect = 0.0;       // |area(D_t) - mu_t(R^2)| / mu_t(R^2)
  double min_u = 0.0;
  double complementarity = 0.0;   // integral of u_t over the complement of D_t
  std::size_t components = 0;
};

struct MonotonicityCheck {
  double t_prev = 0.0;
  double t_next = 0.0;
  double max_excess = 0.0;  // max over nodes of phi_next - phi_prev
  bool nested = true;       // max_excess <= h
};

struct HeleShawResult {
  std::vector<HeleShawStep> steps;
  std::vector<MonotonicityCheck> monotonicity;
  bool monotone() const;
};

// mu_t = chi_{D0} + t nu.
Measure heleshaw_measure(const HeleShawRun& run, double t);

// Solves one time level. prev, when given, is D_s for some s < t.
HeleShawStep heleshaw_step(const HeleShawRun& run, const Grid2D& g, double t, const LevelSetFn* prev = nullptr);

// Sequential warm-started sweep, or cold starts on worker threads for every
// time after the first when parallel is set.
HeleShawResult heleshaw_run(const HeleShawRun& run, const Grid2D& g, bool parallel = false);

}  // namespace qdomain

#endif  // QDOMAIN_HELESHAW_HPP
