// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDOMAIN_ORACLE_HPP
#define QDOMAIN_ORACLE_HPP

#include "qdomain/geometry.hpp"
#include "qdomain/levelset.hpp"
#include "qdomain/measure.hpp"

namespace qdomain {

// mu = M * indicator of the ball B(center, a) in dimension N (1 or 2).
// The quadrature domain is the concentric ball of radius r = M^(1/N) a.
struct RadialCase {
  Point center;
  double a = 0.5;
  double M = 4.0;
  int N = 2;

  double r() const;
};

// Closed-form solution as a function of the distance s = |x - center|.
double radial_u(const RadialCase& c, double s);
double radial_du(const RadialCase& c, double s);  // d/ds
double radial_u(const RadialCase& c, Point x);
Vec2 radial_gradient(const RadialCase& c, Point x);

// Radius of the ball with volume alpha in dimension N.
double point_mass_domain(double alpha, int N);

// |area{phi < 0} - mu(R^2)| / mu(R^2).
double mass_identity_defect(const LevelSetFn& phi, const Measure& mu);
double mass_identity_defect(double area, const Measure& mu);

}  // namespace qdomain

#endif  // QDOMAIN_ORACLE_HPP
