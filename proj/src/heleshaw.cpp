// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdomain/heleshaw.hpp"

#include <algorithm>
#include <future>
#include <limits>
#include <sstream>

#include "qdomain/error.hpp"

namespace qdomain {

namespace {

void flatten(const Shape& s, std::vector<Shape>& out) {
  if (s.kind() == Shape::Kind::Union) {
    for (const Shape& p : s.parts()) flatten(p, out);
  } else {
    out.push_back(s);
  }
}

bool overlap(const Shape& a, const Shape& b) {
  const auto [alo, ahi] = a.bounds();
  const auto [blo, bhi] = b.bounds();
  const Point lo{std::max(alo.x, blo.x), std::max(alo.y, blo.y)};
  const Point hi{std::min(ahi.x, bhi.x), std::min(ahi.y, bhi.y)};
  if (lo.x >= hi.x || lo.y >= hi.y) return false;
  constexpr int n = 128;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const Point p{lo.x + (hi.x - lo.x) * i / n, lo.y + (hi.y - lo.y) * j / n};
      if (a.signed_distance(p) < 0.0 && b.signed_distance(p) < 0.0) return true;
    }
  }
  return false;
}

std::vector<MeasureComponent> indicator_components(const Shape& d0) {
  std::vector<Shape> parts;
  flatten(d0, parts);
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = i + 1; j < parts.size(); ++j)
      if (overlap(parts[i], parts[j])) {
        throw Error(ErrorKind::Configuration, "initial Hele-Shaw domain must be a union of disjoint parts");
      }
  std::vector<MeasureComponent> out;
  for (const Shape& s : parts) {
    if (s.kind() == Shape::Kind::Disc) {
      out.push_back(UniformDisc{s.center(), s.radius(), Polynomial::constant(1.0)});
    } else {
      out.push_back(WeightedPolygon{s.vertices(), Polynomial::constant(1.0)});
    }
  }
  return out;
}

}  // namespace

bool HeleShawResult::monotone() const {
  return std::all_of(monotonicity.begin(), monotonicity.end(), [](const MonotonicityCheck& m) { return m.nested; });
}

Measure heleshaw_measure(const HeleShawRun& run, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::Parameter, "Hele-Shaw time must be non-negative");
  std::vector<MeasureComponent> comps;
  if (run.d0) comps = indicator_components(*run.d0);
  if (t > 0.0) {
    const Measure grown = run.nu.scaled(t);
    comps.insert(comps.end(), grown.components().begin(), grown.components().end());
  }
  if (comps.empty()) throw Error(ErrorKind::Parameter, "Hele-Shaw measure is zero at t = 0 without an initial domain");
  return Measure(std::move(comps));
}

HeleShawStep heleshaw_step(const HeleShawRun& run, const Grid2D& g, double t, const LevelSetFn* prev) {
  const Measure mu = heleshaw_measure(run, t);
  const double h = g.h();
  HeleShawStep step{t, LevelSetFn(ScalarField(g)), ScalarField(g), {}, 0.0, 0.0, 0.0, 0};

  if (t == 0.0) {
    step.d_t = from_shape(*run.d0, g);
  } else {
    const LevelSetFn start = prev ? *prev : support_level_set(mu, g, run.initial_offset);
    MethodOneResult res = run_method_one(mu, start, run.solver);
    step.d_t = run.d0 ? unite(res.phi, from_shape(*run.d0, g)) : res.phi;
    step.u_t = std::move(res.u);
    step.reports = std::move(res.reports);
  }

  step.mass_defect = std::abs(step.d_t.area() - total_mass(mu)) / total_mass(mu);
  step.min_u = *std::min_element(step.u_t.values().begin(), step.u_t.values().end());
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (!(step.d_t.phi()[n] < 0.0)) step.complementarity += std::max(step.u_t[n], 0.0) * h * h;
  }
  for (const MarkerCurve& c : step.d_t.contour()) {
    if (c.vertices.size() >= 3) ++step.components;
  }

  const double box_area = (g.nx() - 1) * h * (g.ny() - 1) * h;
  if (step.min_u < -h) {
    std::ostringstream msg;
    msg << "u_t reaches " << step.min_u << " at t = " << t << ", below the positivity tolerance -h";
    throw Error(ErrorKind::Resolution, msg.str());
  }
  if (step.complementarity > h * box_area) {
    std::ostringstream msg;
    msg << "complementarity integral " << step.complementarity << " exceeds h * area at t = " << t;
    throw Error(ErrorKind::Resolution, msg.str());
  }
  return step;
}

HeleShawResult heleshaw_run(const HeleShawRun& run, const Grid2D& g, bool parallel) {
  if (run.times.empty()) throw Error(ErrorKind::Configuration, "Hele-Shaw run needs at least one time");
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    if (!(run.times[k] >= 0.0)) throw Error(ErrorKind::Configuration, "Hele-Shaw times must be non-negative");
    if (k > 0 && run.times[k] < run.times[k - 1]) {
      throw Error(ErrorKind::Configuration, "Hele-Shaw times must be non-decreasing");
    }
  }

  HeleShawResult out;
  out.steps.push_back(heleshaw_step(run, g, run.times.front()));
  if (parallel) {
    std::vector<std::future<HeleShawStep>> pending;
    for (std::size_t k = 1; k < run.times.size(); ++k) {
      pending.push_back(std::async(std::launch::async, [&run, &g, t = run.times[k]] { return heleshaw_step(run, g, t); }));
    }
    for (auto& f : pending) out.steps.push_back(f.get());
  } else {
    for (std::size_t k = 1; k < run.times.size(); ++k) {
      out.steps.push_back(heleshaw_step(run, g, run.times[k], &out.steps.back().d_t));
    }
  }

  for (std::size_t k = 1; k < out.steps.size(); ++k) {
    MonotonicityCheck m{out.steps[k - 1].t, out.steps[k].t, -std::numeric_limits<double>::infinity(), true};
    const auto& a = out.steps[k - 1].d_t.phi();
    const auto& b = out.steps[k].d_t.phi();
    for (std::size_t n = 0; n < g.size(); ++n) m.max_excess = std::max(m.max_excess, b[n] - a[n]);
    m.nested = m.max_excess <= g.h();
    out.monotonicity.push_back(m);
  }
  return out;
}

}  // namespace qdomain
