// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdomain/method_one.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qdomain {

void MethodOneConfig::validate() const {
  if (!(tol > 0.0)) throw Error(ErrorKind::Configuration, "method one: tol must be positive");
  if (max_iters < 0) throw Error(ErrorKind::Configuration, "method one: max_iters must be non-negative");
  if (theta_iters < 1) throw Error(ErrorKind::Configuration, "method one: theta_iters must be at least 1");
  if (!(tau > 0.0 && tau <= 1.0)) throw Error(ErrorKind::Configuration, "method one: tau must lie in (0, 1]");
  if (!(zeta > 0.0 && zeta <= 1.0)) throw Error(ErrorKind::Configuration, "method one: zeta must lie in (0, 1]");
  if (!(theta0 > 0.0)) throw Error(ErrorKind::Configuration, "method one: theta0 must be positive");
  if (max_step_cells < 0.0) throw Error(ErrorKind::Configuration, "method one: max_step_cells must be >= 0");
  if (!(mass_guard > 0.0)) throw Error(ErrorKind::Configuration, "method one: mass_guard must be positive");
}

double theta_update(double sup_boundary_u) {
  if (!(sup_boundary_u > 0.0)) return 0.0;
  return std::sqrt(2.0 / sup_boundary_u);
}

namespace {

double sup_of(const std::vector<double>& values) {
  double s = 0.0;
  for (double v : values) s = std::max(s, v);
  return s;
}

void require_support_inside(const std::vector<std::uint8_t>& support, const LevelSetFn& phi) {
  for (std::size_t n = 0; n < support.size(); ++n) {
    if (support[n] && !(phi.phi()[n] < 0.0)) {
      throw Error(ErrorKind::Geometry, "support of the measure is not strictly inside the current domain");
    }
  }
}

}  // namespace

double theta_update(const DomainMask& mask, const ScalarField& u, double theta_used) {
  return theta_update(sup_of(robin_boundary_values(mask, u, theta_used)));
}

LevelSetFn support_level_set(const Measure& mu_in, const Grid2D& g, double offset) {
  if (offset < 0.0) throw Error(ErrorKind::Parameter, "initial-domain offset must be non-negative");
  const Measure mu = mu_in.with_point_radius(3.0 * g.h());
  ScalarField phi = ScalarField::sample(g, [&](Point p) {
    double best = std::numeric_limits<double>::infinity();
    for (const MeasureComponent& c : mu.components()) {
      double d;
      if (const auto* disc = std::get_if<UniformDisc>(&c)) {
        d = distance(p, disc->center) - disc->radius;
      } else if (const auto* pm = std::get_if<PointMass>(&c)) {
        d = distance(p, pm->location) - pm->epsilon;
      } else {
        const auto& v = std::get<WeightedPolygon>(c).vertices;
        d = distance_to_polygon(p, v);
        if (point_in_polygon(p, v)) d = -d;
      }
      best = std::min(best, d);
    }
    return best - offset;
  });
  const auto [lo, hi] = mu.support_bounds();
  if (g.margin(lo - Vec2{offset, offset}) < g.h() || g.margin(hi + Vec2{offset, offset}) < g.h()) {
    throw Error(ErrorKind::Configuration, "initial domain does not fit inside the grid");
  }
  return LevelSetFn(std::move(phi));
}

MethodOneResult run_method_one(const Measure& mu, const LevelSetFn& omega0, const MethodOneConfig& cfg,
                               const ReportSink& sink, const FieldSink& fields) {
  cfg.validate();
  const Grid2D& g = omega0.grid();
  const double h = g.h();
  const double mass = total_mass(mu);
  const ScalarField density = rasterize(mu, g);
  ScalarField f(g);
  for (std::size_t n = 0; n < g.size(); ++n) f[n] = 1.0 - density[n];
  const auto support = support_nodes(mu, g);

  LevelSetFn phi = omega0;
  require_support_inside(support, phi);
  ScalarField u(g);
  double theta = cfg.theta0;
  std::vector<IterationReport> reports;

  for (int k = 0;; ++k) {
    if (fields) fields(k, phi);
    const DomainMask mask = DomainMask::from_level_set(phi.phi());
    IterationReport rep;
    rep.k = k;

    std::vector<double> ub;
    for (int t = 0; t < cfg.theta_iters; ++t) {
      SolveStats stats;
      SolveOptions opt;
      opt.initial_guess = &u;
      opt.stats = &stats;
      u = solve_robin(mask, f, theta, opt);
      rep.cg_iterations += stats.iterations;
      ub = robin_boundary_values(mask, u, theta);
      rep.theta = theta;
      const double next = theta_update(sup_of(ub));
      if (next == 0.0) break;
      if (t + 1 < cfg.theta_iters) theta = next;
    }
    rep.sup_boundary_u = sup_of(ub);
    rep.area = phi.area();
    rep.mass_defect = std::abs(rep.area - mass) / mass;

    if (rep.sup_boundary_u < cfg.tol) {
      reports.push_back(rep);
      if (sink) sink(rep);
      if (rep.mass_defect > cfg.mass_guard) {
        std::ostringstream msg;
        msg << "interface values vanished but the mass defect is " << rep.mass_defect
            << "; the grid is too coarse for this measure";
        throw Error(ErrorKind::Resolution, msg.str());
      }
      return MethodOneResult{phi, u, std::move(reports), true};
    }
    if (k >= cfg.max_iters) {
      reports.push_back(rep);
      if (sink) sink(rep);
      std::ostringstream msg;
      msg << "method one did not converge in " << cfg.max_iters << " iterations (sup of u on the interface "
          << rep.sup_boundary_u << ", tol " << cfg.tol << ")";
      throw MethodOneFailure(msg.str(), MethodOneResult{phi, u, std::move(reports), false});
    }

    std::vector<double> speed(ub.size());
    double top = 0.0;
    for (std::size_t c = 0; c < ub.size(); ++c) {
      speed[c] = cfg.zeta * std::sqrt(2.0 * std::max(ub[c], 0.0));
      top = std::max(top, speed[c]);
    }
    ExtensionReport ext;
    const ScalarField v = solve_extension(mask, support, speed, cfg.extension_forcing, {}, &ext);
    double tau = cfg.tau;
    if (cfg.max_step_cells > 0.0 && tau * top > cfg.max_step_cells * h) tau = cfg.max_step_cells * h / top;
    rep.max_displacement = tau * top;
    rep.clamped_velocities = ext.clamped;
    rep.cg_iterations += ext.stats.iterations;
    reports.push_back(rep);
    if (sink) sink(rep);

    phi = advance(phi, v, tau);
    require_support_inside(support, phi);
    // Next theta follows the latest interface values.
    const double next = theta_update(rep.sup_boundary_u);
    if (next > 0.0) theta = next;
  }
}

namespace {

struct ShotState {
  double u;
  double du;
};

// Exact integration of u'' = 1 - mu from c to d for piecewise-constant mu.
ShotState shoot(const Measure1D& mu, double c, double d, double uc, double duc, std::vector<double>* xs = nullptr,
                std::vector<double>* us = nullptr) {
  std::vector<double> breaks{c, d};
  for (const Interval1D& p : mu.pieces()) {
    if (p.lo > c && p.lo < d) breaks.push_back(p.lo);
    if (p.hi > c && p.hi < d) breaks.push_back(p.hi);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  ShotState s{uc, duc};
  std::size_t next_sample = 0;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double x0 = breaks[b];
    const double x1 = breaks[b + 1];
    const double acc = 1.0 - mu.density(0.5 * (x0 + x1));
    if (xs && us) {
      while (next_sample < xs->size() && (*xs)[next_sample] <= x1) {
        const double l = (*xs)[next_sample] - x0;
        (*us)[next_sample] = s.u + s.du * l + 0.5 * acc * l * l;
        ++next_sample;
      }
    }
    const double len = x1 - x0;
    s.u += s.du * len + 0.5 * acc * len * len;
    s.du += acc * len;
  }
  return s;
}

}  // namespace

OneDimResult run_1d(const Measure1D& mu, double c, double d, int samples) {
  if (!(d > c)) throw Error(ErrorKind::Parameter, "1-D interval must satisfy c < d");
  if (c > mu.support_lo() || d < mu.support_hi()) {
    throw Error(ErrorKind::Parameter, "1-D interval must contain the support of the measure");
  }
  const double mass = mu.total_mass();
  if (d - c > 1.1 * mass) {
    throw Error(ErrorKind::Parameter, "1-D interval is not close to the support (longer than 1.1 times the mass)");
  }

  auto residual = [&](double a) {
    const ShotState s = shoot(mu, c, d, a, std::sqrt(2.0 * a));
    return s.du + std::sqrt(2.0 * std::max(s.u, 0.0));
  };

  double lo = 0.0;
  if (residual(lo) >= 0.0) {
    // Already consistent at a = 0 only when the boundary data vanish.
    if (residual(lo) > 1e-12) {
      throw Error(ErrorKind::Parameter, "shooting bracket failed; the initial interval is too far from the support");
    }
  }
  double hi = std::max(1.0, mass * mass);
  int grow = 0;
  while (residual(hi) < 0.0) {
    hi *= 2.0;
    if (++grow > 60) throw Error(ErrorKind::Parameter, "shooting bracket failed; no upper bound for u(c)");
  }
  double a = 0.0;
  if (residual(0.0) < 0.0) {
    for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (residual(mid) < 0.0 ? lo : hi) = mid;
    }
    a = 0.5 * (lo + hi);
  }

  OneDimResult out;
  out.x.resize(static_cast<std::size_t>(std::max(samples, 2)));
  out.u.resize(out.x.size());
  for (std::size_t k = 0; k < out.x.size(); ++k) out.x[k] = c + (d - c) * static_cast<double>(k) / (out.x.size() - 1);
  const ShotState end = shoot(mu, c, d, a, std::sqrt(2.0 * a), &out.x, &out.u);
  out.u_c = a;
  out.u_d = std::max(end.u, 0.0);
  out.c_f = c - std::sqrt(2.0 * out.u_c);
  out.d_f = d + std::sqrt(2.0 * out.u_d);
  return out;
}

}  // namespace qdomain
