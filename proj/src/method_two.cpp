// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdomain/method_two.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qdomain/poisson.hpp"

namespace qdomain {

void MethodTwoConfig::validate() const {
  if (!(grad_tol > 0.0)) throw Error(ErrorKind::Configuration, "method two: grad_tol must be positive");
  if (max_iters < 0) throw Error(ErrorKind::Configuration, "method two: max_iters must be non-negative");
  if (!(beta > 0.0 && beta <= 1.0)) throw Error(ErrorKind::Configuration, "method two: beta must lie in (0, 1]");
  if (spacing < 0.0) throw Error(ErrorKind::Configuration, "method two: spacing must be >= 0");
  if (max_halvings < 0) throw Error(ErrorKind::Configuration, "method two: max_halvings must be >= 0");
}

MarkerCurve resample(const MarkerCurve& curve, double spacing) {
  const auto& v = curve.vertices;
  const std::size_t n = v.size();
  if (n < 3) throw Error(ErrorKind::Geometry, "marker curve needs at least three vertices");
  if (!(spacing > 0.0)) throw Error(ErrorKind::Parameter, "marker spacing must be positive");
  std::vector<double> cum(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + distance(v[i], v[(i + 1) % n]);
  const double total = cum[n];
  const std::size_t m = std::max<std::size_t>(8, static_cast<std::size_t>(std::lround(total / spacing)));
  MarkerCurve out;
  out.vertices.reserve(m);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double s = total * static_cast<double>(k) / static_cast<double>(m);
    while (seg + 1 < n && cum[seg + 1] <= s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double t = len > 0.0 ? (s - cum[seg]) / len : 0.0;
    out.vertices.push_back(v[seg] + (v[(seg + 1) % n] - v[seg]) * t);
  }
  return out;
}

namespace {

bool adjacent(std::size_t i, std::size_t j, std::size_t n) { return j == i + 1 || (i == 0 && j == n - 1); }

bool find_crossing(const std::vector<Point>& v, std::size_t& si, std::size_t& sj) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = v[i];
    const Point b = v[(i + 1) % n];
    const double xlo = std::min(a.x, b.x), xhi = std::max(a.x, b.x);
    const double ylo = std::min(a.y, b.y), yhi = std::max(a.y, b.y);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (adjacent(i, j, n)) continue;
      const Point c = v[j];
      const Point d = v[(j + 1) % n];
      if (std::max(c.x, d.x) < xlo || std::min(c.x, d.x) > xhi || std::max(c.y, d.y) < ylo ||
          std::min(c.y, d.y) > yhi) {
        continue;
      }
      if (segments_intersect(a, b, c, d)) {
        si = i;
        sj = j;
        return true;
      }
    }
  }
  return false;
}

}  // namespace

bool has_self_intersection(const MarkerCurve& curve) {
  std::size_t i = 0, j = 0;
  return find_crossing(curve.vertices, i, j);
}

MarkerCurve remove_loops(const MarkerCurve& curve) {
  std::vector<Point> v = curve.vertices;
  std::size_t i = 0, j = 0;
  for (std::size_t guard = 0; guard < curve.vertices.size() && v.size() >= 3 && find_crossing(v, i, j); ++guard) {
    const Point p = segment_intersection_point(v[i], v[(i + 1) % v.size()], v[j], v[(j + 1) % v.size()]);
    std::vector<Point> inner(v.begin() + static_cast<std::ptrdiff_t>(i + 1), v.begin() + static_cast<std::ptrdiff_t>(j + 1));
    inner.push_back(p);
    std::vector<Point> outer(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(i + 1));
    outer.push_back(p);
    outer.insert(outer.end(), v.begin() + static_cast<std::ptrdiff_t>(j + 1), v.end());
    v = signed_area(inner) > signed_area(outer) ? std::move(inner) : std::move(outer);
  }
  return MarkerCurve{std::move(v)};
}

std::vector<Vec2> vertex_normals(const MarkerCurve& curve) {
  const auto& v = curve.vertices;
  const std::size_t n = v.size();
  std::vector<Vec2> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 chord = v[(i + 1) % n] - v[(i + n - 1) % n];
    out[i] = normalized(Vec2{chord.y, -chord.x});
  }
  return out;
}

std::vector<double> vertex_weights(const MarkerCurve& curve) {
  const auto& v = curve.vertices;
  const std::size_t n = v.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = 0.5 * (distance(v[i], v[(i + 1) % n]) + distance(v[i], v[(i + n - 1) % n]));
  }
  return out;
}

MarkerGradient marker_gradients(const MarkerCurve& curve, const ScalarField& u) {
  const double h = u.grid().h();
  const double d = 1.5 * h;
  const auto normals = vertex_normals(curve);
  MarkerGradient out;
  out.grad.resize(normals.size());
  double max_grad = 0.0, max_tangential = 0.0;
  for (std::size_t i = 0; i < normals.size(); ++i) {
    const Vec2 n = normals[i];
    const Vec2 t{-n.y, n.x};
    const Point p1 = curve.vertices[i] - n * d;
    const Point p2 = curve.vertices[i] - n * (2.0 * d);
    const double u1 = interpolate(u, p1);
    const double u2 = interpolate(u, p2);
    const double inward = (4.0 * u1 - u2) / (2.0 * d);
    const double tangential = dot(gradient_at(u, p1), t);
    out.grad[i] = n * (-inward) + t * tangential;
    max_grad = std::max(max_grad, norm(out.grad[i]));
    max_tangential = std::max(max_tangential, std::abs(tangential));
  }
  out.tangential_residual = max_grad > 0.0 ? max_tangential / max_grad : 0.0;
  return out;
}

double boundary_gradient_norm(const MarkerCurve& curve, const std::vector<Vec2>& grad) {
  const auto w = vertex_weights(curve);
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += dot(grad[i], grad[i]) * w[i];
  return std::sqrt(acc);
}

MarkerCurve quasi_newton_step(const MarkerCurve& gamma, const ScalarField& u, double beta, double spacing) {
  if (!(beta > 0.0 && beta <= 1.0)) throw Error(ErrorKind::Parameter, "step scale beta must lie in (0, 1]");
  if (spacing == 0.0) spacing = 2.0 * u.grid().h();
  const MarkerGradient mg = marker_gradients(gamma, u);
  MarkerCurve moved = gamma;
  for (std::size_t i = 0; i < moved.vertices.size(); ++i) moved.vertices[i] -= mg.grad[i] * beta;
  moved = resample(remove_loops(moved), spacing);
  if (has_self_intersection(moved) || signed_area(moved.vertices) <= 0.0) {
    throw Error(ErrorKind::StepTooLarge, "marker update produced a self-intersecting curve");
  }
  return moved;
}

double energy(const MarkerCurve& sigma, const ScalarField& u, const ScalarField& mu_field) {
  const Grid2D& g = u.grid();
  const DomainMask mask = DomainMask::from_polygon(g, sigma.vertices);
  const LinearSystem sys = assemble_dirichlet(mask, ScalarField(g));
  std::vector<double> x(sys.size()), ax(sys.size());
  for (std::size_t r = 0; r < sys.size(); ++r) x[r] = u[sys.nodes[r]];
  sys.multiply(x, ax);
  double dirichlet = 0.0, source = 0.0;
  for (std::size_t r = 0; r < sys.size(); ++r) {
    dirichlet += x[r] * ax[r];
    source += (1.0 - mu_field[sys.nodes[r]]) * x[r];
  }
  const double h2 = g.h() * g.h();
  return 0.5 * dirichlet * h2 + source * h2;
}

ScalarField solve_on_polygon(const MarkerCurve& sigma, const ScalarField& mu_field, const ScalarField* guess,
                             int* cg_iterations) {
  const Grid2D& g = mu_field.grid();
  const DomainMask mask = DomainMask::from_polygon(g, sigma.vertices);
  ScalarField f(g);
  for (std::size_t n = 0; n < g.size(); ++n) f[n] = 1.0 - mu_field[n];
  SolveStats stats;
  SolveOptions opt;
  opt.initial_guess = guess;
  opt.stats = &stats;
  ScalarField u = solve_dirichlet(mask, f, opt);
  if (cg_iterations) *cg_iterations = stats.iterations;
  return u;
}

ShapeDerivativeCheck shape_derivative_check(const MarkerCurve& sigma, const ScalarField& u, std::span<const double> vn,
                                            const ScalarField& mu_field, double epsilon) {
  if (vn.size() != sigma.vertices.size()) throw Error(ErrorKind::Parameter, "need one normal velocity per marker");
  ShapeDerivativeCheck out;
  out.epsilon = epsilon > 0.0 ? epsilon : 0.25 * u.grid().h();
  const auto normals = vertex_normals(sigma);
  const auto w = vertex_weights(sigma);
  const MarkerGradient mg = marker_gradients(sigma, u);
  for (std::size_t i = 0; i < vn.size(); ++i) out.analytic -= 0.5 * dot(mg.grad[i], mg.grad[i]) * vn[i] * w[i];

  auto perturbed_energy = [&](double e) {
    MarkerCurve moved = sigma;
    for (std::size_t i = 0; i < vn.size(); ++i) moved.vertices[i] += normals[i] * (e * vn[i]);
    const ScalarField um = solve_on_polygon(moved, mu_field, &u);
    return energy(moved, um, mu_field);
  };
  const double e0 = energy(sigma, u, mu_field);
  const double ep = perturbed_energy(out.epsilon);
  const double em = perturbed_energy(-out.epsilon);
  out.finite_diff = (ep - em) / (2.0 * out.epsilon);
  out.forward_diff = (ep - e0) / out.epsilon;
  return out;
}

namespace {

bool fits_grid(const Grid2D& g, const MarkerCurve& c) {
  for (const Point& p : c.vertices) {
    if (g.margin(p) < 2.0 * g.h()) return false;
  }
  return true;
}

bool support_inside(const std::vector<std::uint8_t>& support, const Grid2D& g, const MarkerCurve& c) {
  for (std::size_t n = 0; n < support.size(); ++n) {
    if (support[n] && !point_in_polygon(g.node(n), c.vertices)) return false;
  }
  return true;
}

}  // namespace

MethodTwoResult run_method_two(const Measure& mu, const MarkerCurve& gamma0, const Grid2D& g,
                               const MethodTwoConfig& cfg, const MethodTwoSink& sink) {
  cfg.validate();
  const double spacing = cfg.spacing > 0.0 ? cfg.spacing : 2.0 * g.h();
  const double mass = total_mass(mu);
  const ScalarField mu_field = rasterize(mu, g);
  const auto support = support_nodes(mu, g);

  MarkerCurve gamma = gamma0;
  if (signed_area(gamma.vertices) < 0.0) std::reverse(gamma.vertices.begin(), gamma.vertices.end());
  gamma = resample(gamma, spacing);
  if (has_self_intersection(gamma)) throw Error(ErrorKind::Configuration, "initial marker curve is not simple");
  if (!fits_grid(g, gamma)) throw Error(ErrorKind::Configuration, "initial marker curve does not fit inside the grid");
  if (!support_inside(support, g, gamma)) {
    throw Error(ErrorKind::Configuration, "initial marker curve does not enclose the support of the measure");
  }

  ScalarField u(g);
  std::vector<MethodTwoReport> reports;
  for (int k = 0;; ++k) {
    MethodTwoReport rep;
    rep.k = k;
    u = solve_on_polygon(gamma, mu_field, &u, &rep.cg_iterations);
    const MarkerGradient mg = marker_gradients(gamma, u);
    rep.grad_norm = boundary_gradient_norm(gamma, mg.grad);
    rep.tangential_residual = mg.tangential_residual;
    rep.energy = energy(gamma, u, mu_field);
    rep.area = std::abs(signed_area(gamma.vertices));
    rep.mass_defect = std::abs(rep.area - mass) / mass;
    rep.markers = gamma.vertices.size();

    if (rep.grad_norm < cfg.grad_tol) {
      reports.push_back(rep);
      if (sink) sink(rep);
      return MethodTwoResult{gamma, u, std::move(reports), true};
    }
    if (k >= cfg.max_iters) {
      reports.push_back(rep);
      if (sink) sink(rep);
      std::ostringstream msg;
      msg << "method two did not converge in " << cfg.max_iters << " iterations (boundary gradient norm "
          << rep.grad_norm << ", tol " << cfg.grad_tol << ")";
      throw MethodTwoFailure(ErrorKind::NonConvergence, msg.str(), MethodTwoResult{gamma, u, std::move(reports), false});
    }

    double beta = cfg.beta;
    bool moved = false;
    for (int attempt = 0; attempt <= cfg.max_halvings; ++attempt, beta *= 0.5) {
      try {
        MarkerCurve next = quasi_newton_step(gamma, u, beta, spacing);
        if (!fits_grid(g, next) || !support_inside(support, g, next)) continue;
        double top = 0.0;
        for (const Vec2& gr : mg.grad) top = std::max(top, norm(gr));
        rep.beta = beta;
        rep.max_displacement = beta * top;
        gamma = std::move(next);
        moved = true;
        break;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::StepTooLarge) throw;
      }
    }
    reports.push_back(rep);
    if (sink) sink(rep);
    if (!moved) {
      throw MethodTwoFailure(ErrorKind::StepTooLarge,
                             "marker update kept failing after halving the step " + std::to_string(cfg.max_halvings) +
                                 " times",
                             MethodTwoResult{gamma, u, std::move(reports), false});
    }
  }
}

}  // namespace qdomain
