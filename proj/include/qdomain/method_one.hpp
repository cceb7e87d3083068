// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDOMAIN_METHOD_ONE_HPP
#define QDOMAIN_METHOD_ONE_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "qdomain/error.hpp"
#include "qdomain/levelset.hpp"
#include "qdomain/measure.hpp"
#include "qdomain/poisson.hpp"

namespace qdomain {

struct MethodOneConfig {
  double tol = 1e-4;            // stop once sup of u on the interface drops below tol
  int max_iters = 40;           // interface advances allowed
  int theta_iters = 3;          // Robin solve / theta update rounds per outer iteration
  double tau = 1.0;             // relaxation of the advance, in (0, 1]
  double zeta = 2.0 - std::sqrt(2.0);
  double theta0 = 1.0;          // Robin coefficient for the very first solve
  ExtensionForcing extension_forcing = ExtensionForcing::One;
  double max_step_cells = 0.0;  // cap on the displacement per step in cells; 0 disables
  double mass_guard = 0.05;     // converged runs with a larger mass defect are rejected

  void validate() const;
};

struct IterationReport {
  int k = 0;
  double sup_boundary_u = 0.0;
  double mass_defect = 0.0;
  double area = 0.0;
  double max_displacement = 0.0;  // 0 on the final (stopping) report
  double theta = 0.0;
  int cg_iterations = 0;
  std::size_t clamped_velocities = 0;
};

struct MethodOneResult {
  LevelSetFn phi;
  ScalarField u;
  std::vector<IterationReport> reports;
  bool converged = false;
  int iterations() const { return reports.empty() ? 0 : reports.back().k; }
};

// Raised when max_iters is exhausted; keeps the last iterate and all reports.
class MethodOneFailure : public Error {
 public:
  MethodOneFailure(const std::string& what, MethodOneResult partial)
      : Error(ErrorKind::NonConvergence, what), partial_(std::move(partial)) {}
  const MethodOneResult& partial() const { return partial_; }

 private:
  MethodOneResult partial_;
};

// theta = sqrt(2 / sup u); 0 when sup u is not positive, meaning the
// interface already sits on the free boundary.
double theta_update(double sup_boundary_u);
double theta_update(const DomainMask& mask, const ScalarField& u, double theta_used);

// Level set of {x : dist(x, supp mu) < offset}; point masses use their
// smoothing radius (3h when unresolved). offset = 0 gives supp mu itself.
LevelSetFn support_level_set(const Measure& mu, const Grid2D& g, double offset);

using ReportSink = std::function<void(const IterationReport&)>;
// Receives the level set at the start of every outer iteration.
using FieldSink = std::function<void(int k, const LevelSetFn&)>;

MethodOneResult run_method_one(const Measure& mu, const LevelSetFn& omega0, const MethodOneConfig& cfg,
                               const ReportSink& sink = {}, const FieldSink& fields = {});

struct OneDimResult {
  double c_f = 0.0;
  double d_f = 0.0;
  double u_c = 0.0;
  double u_d = 0.0;
  std::vector<double> x;
  std::vector<double> u;
};

// u'' = 1 - mu on (c, d) with u'(c) = sqrt(2 u(c)), u'(d) = -sqrt(2 u(d)),
// followed by one displacement step of each end point.
OneDimResult run_1d(const Measure1D& mu, double c, double d, int samples = 201);

}  // namespace qdomain

#endif  // QDOMAIN_METHOD_ONE_HPP
