// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdomain/oracle.hpp"

#include <cmath>
#include <numbers>

#include "qdomain/error.hpp"

namespace qdomain {

namespace {

void check(const RadialCase& c) {
  if (c.N != 1 && c.N != 2) throw Error(ErrorKind::Parameter, "radial oracle supports dimensions 1 and 2 only");
  if (!(c.a > 0.0)) throw Error(ErrorKind::Parameter, "radial oracle needs a > 0");
  if (!(c.M > 1.0)) throw Error(ErrorKind::Parameter, "radial oracle needs M > 1");
}

}  // namespace

double RadialCase::r() const {
  check(*this);
  return std::pow(M, 1.0 / N) * a;
}

// Branch constants follow from u = u' = 0 at s = r and C^1 matching at s = a.
double radial_u(const RadialCase& c, double s) {
  const double r = c.r();
  s = std::abs(s);
  if (s >= r) return 0.0;
  if (c.N == 1) {
    if (s >= c.a) return 0.5 * (s - r) * (s - r);
    return 0.5 * (1.0 - c.M) * s * s + 0.5 * c.M * (c.M - 1.0) * c.a * c.a;
  }
  if (s >= c.a) return 0.25 * (s * s - r * r) + 0.5 * r * r * std::log(r / s);
  return 0.25 * (1.0 - c.M) * s * s + 0.5 * r * r * std::log(r / c.a);
}

double radial_du(const RadialCase& c, double s) {
  const double r = c.r();
  const double sign = s < 0.0 ? -1.0 : 1.0;
  s = std::abs(s);
  if (s >= r) return 0.0;
  if (c.N == 1) {
    if (s >= c.a) return sign * (s - r);
    return sign * (1.0 - c.M) * s;
  }
  if (s >= c.a) return 0.5 * s - 0.5 * r * r / s;
  return 0.5 * (1.0 - c.M) * s;
}

double radial_u(const RadialCase& c, Point x) {
  return radial_u(c, c.N == 1 ? x.x - c.center.x : distance(x, c.center));
}

Vec2 radial_gradient(const RadialCase& c, Point x) {
  if (c.N == 1) return {radial_du(c, x.x - c.center.x), 0.0};
  const Vec2 d = x - c.center;
  const double s = norm(d);
  if (s == 0.0) return {0.0, 0.0};
  return d * (radial_du(c, s) / s);
}

double point_mass_domain(double alpha, int N) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::Parameter, "point mass must be positive");
  if (N < 1) throw Error(ErrorKind::Parameter, "dimension must be at least 1");
  const double omega = std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N + 1.0);
  return std::pow(alpha / omega, 1.0 / N);
}

double mass_identity_defect(double area, const Measure& mu) {
  const double m = total_mass(mu);
  return std::abs(area - m) / m;
}

double mass_identity_defect(const LevelSetFn& phi, const Measure& mu) {
  return mass_identity_defect(phi.area(), mu);
}

}  // namespace qdomain
