// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDOMAIN_METHOD_TWO_HPP
#define QDOMAIN_METHOD_TWO_HPP

#include <functional>
#include <span>
#include <vector>

#include "qdomain/error.hpp"
#include "qdomain/grid.hpp"
#include "qdomain/measure.hpp"

namespace qdomain {

struct MethodTwoConfig {
  double grad_tol = 5e-3;  // stop once the L2(Gamma) norm of grad u drops below this
  int max_iters = 30;
  double beta = 1.0;       // step scale in (0, 1]
  double spacing = 0.0;    // target marker spacing; 0 selects 2h
  int max_halvings = 5;

  void validate() const;
};

struct MethodTwoReport {
  int k = 0;
  double grad_norm = 0.0;  // L2(Gamma) norm of the sampled gradient
  double energy = 0.0;
  double area = 0.0;
  double mass_defect = 0.0;
  double beta = 0.0;       // step scale actually used (0 on the final report)
  double max_displacement = 0.0;
  double tangential_residual = 0.0;  // max |tangential part| / max |grad u|
  std::size_t markers = 0;
  int cg_iterations = 0;
};

struct MethodTwoResult {
  MarkerCurve gamma;
  ScalarField u;
  std::vector<MethodTwoReport> reports;
  bool converged = false;
  int iterations() const { return reports.empty() ? 0 : reports.back().k; }
};

class MethodTwoFailure : public Error {
 public:
  MethodTwoFailure(ErrorKind kind, const std::string& what, MethodTwoResult partial)
      : Error(kind, what), partial_(std::move(partial)) {}
  const MethodTwoResult& partial() const { return partial_; }

 private:
  MethodTwoResult partial_;
};

// Uniform arc-length resampling with about perimeter / spacing markers.
MarkerCurve resample(const MarkerCurve& curve, double spacing);

bool has_self_intersection(const MarkerCurve& curve);
// Cuts every crossing loop, keeping the side with the larger enclosed area.
MarkerCurve remove_loops(const MarkerCurve& curve);

// Outward unit normals at the vertices (central chord rotated clockwise).
std::vector<Vec2> vertex_normals(const MarkerCurve& curve);
// Half the sum of the two adjacent segment lengths.
std::vector<double> vertex_weights(const MarkerCurve& curve);

struct MarkerGradient {
  std::vector<Vec2> grad;
  double tangential_residual = 0.0;
};

// Gradient of u at each marker: the normal part from a one-sided quadratic
// fit with u = 0 on the curve and samples 1.5h and 3h inside, the tangential
// part from gradient_at at the first sample.
MarkerGradient marker_gradients(const MarkerCurve& curve, const ScalarField& u);

double boundary_gradient_norm(const MarkerCurve& curve, const std::vector<Vec2>& grad);

// x <- x - beta grad u(x) for every marker, then resample and loop removal.
// Throws StepTooLarge if the result still self-intersects.
MarkerCurve quasi_newton_step(const MarkerCurve& gamma, const ScalarField& u, double beta, double spacing = 0.0);

// x <- x - beta u'(x).
inline double quasi_newton_step_1d(double x, double du, double beta = 1.0) { return x - beta * du; }

// E = int 1/2 |grad u|^2 + int (1 - mu) u over the polygon, with the discrete
// Dirichlet form of the cut-cell stencil.
double energy(const MarkerCurve& sigma, const ScalarField& u, const ScalarField& mu_field);

// Solve Delta u = 1 - mu on the polygon with u = 0 on its boundary.
ScalarField solve_on_polygon(const MarkerCurve& sigma, const ScalarField& mu_field, const ScalarField* guess = nullptr,
                             int* cg_iterations = nullptr);

struct ShapeDerivativeCheck {
  double analytic = 0.0;     // -sum 1/2 |grad u|^2 V_n w
  double finite_diff = 0.0;  // central difference of E with step epsilon
  double forward_diff = 0.0; // one-sided difference of E with step epsilon
  double epsilon = 0.0;
};

// u must be the solution on sigma; mu_field supplies the right-hand side for
// the perturbed solves. epsilon = 0 selects h / 4.
ShapeDerivativeCheck shape_derivative_check(const MarkerCurve& sigma, const ScalarField& u, std::span<const double> vn,
                                            const ScalarField& mu_field, double epsilon = 0.0);

using MethodTwoSink = std::function<void(const MethodTwoReport&)>;

MethodTwoResult run_method_two(const Measure& mu, const MarkerCurve& gamma0, const Grid2D& g,
                               const MethodTwoConfig& cfg, const MethodTwoSink& sink = {});

}  // namespace qdomain

#endif  // QDOMAIN_METHOD_TWO_HPP
