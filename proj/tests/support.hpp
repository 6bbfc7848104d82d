#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"

#include "memstress/memstress.hpp"

namespace testsupport {

using namespace memstress;

constexpr double kPi = 3.14159265358979323846;

// Standard fixtures used across the suites.
inline SurfaceSpec<double> sphere_fixture() {
  return SurfaceSpec<double>::sphere_band(1.0, 0.3);
}
inline SurfaceSpec<double> cylinder_fixture() {
  return SurfaceSpec<double>::cylinder(1.0, 2.0);
}
inline SurfaceSpec<double> catenoid_fixture() {
  return SurfaceSpec<double>::catenoid(0.8, 1.0);
}
inline SurfaceSpec<double> torus_fixture() {
  return SurfaceSpec<double>::torus(2.0, 1.0);
}
inline SurfaceSpec<double> clifford_fixture() {
  return SurfaceSpec<double>::torus(std::sqrt(2.0), 1.0);
}
inline SurfaceSpec<double> ellipsoid_fixture() {
  return SurfaceSpec<double>::ellipsoid_band(1.2, 1.0, 0.8, 0.4);
}
inline SurfaceSpec<double> graph_fixture() {
  return SurfaceSpec<double>::graph(0.2, 1.0, 2.0);
}

inline std::vector<SurfaceSpec<double>> all_fixtures() {
  return {sphere_fixture(),   cylinder_fixture(),  catenoid_fixture(),
          torus_fixture(),    ellipsoid_fixture(), graph_fixture()};
}

inline EmbeddingField<double> emb_of(const SurfaceSpec<double>& spec, int n1,
                                     int n2) {
  return sample_surface(spec, make_default_grid(spec, n1, n2));
}

inline GeometryBundle<double> fd_bundle(const SurfaceSpec<double>& spec,
                                        int n1, int n2) {
  return geometry_bundle(emb_of(spec, n1, n2));
}

inline double rel_err(double got, double want, double floor = 0.0) {
  return std::abs(got - want) /
         std::max({std::abs(got), std::abs(want), floor,
                   std::numeric_limits<double>::min()});
}

inline std::mt19937 rng() { return std::mt19937(12345); }

// --- frozen oracles --------------------------------------------------------

// Neck radius of the catenoid spanning two rings of radius `a` a distance
// `L` apart: roots of c cosh(L / (2c)) = a.  Two roots exist for
// L/a below the critical ratio; the energy-stable branch is the larger
// root.  Returns NaN when no catenoid exists.
inline double catenoid_stable_neck(double a, double L) {
  // x* solves coth x = x; the minimum of c cosh(L/(2c)) over c sits at
  // c = L / (2 x*).
  const double xstar = 1.1996786402577338;
  const double c_min = L / (2 * xstar);
  auto f = [&](double c) { return c * std::cosh(L / (2 * c)) - a; };
  if (f(c_min) > 0) return std::numeric_limits<double>::quiet_NaN();
  double lo = c_min, hi = std::max(a, c_min * (1 + 1e-12));
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) <= 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Critical slenderness above which no catenoid spans the rings.
inline double catenoid_existence_limit() {
  const double xstar = 1.1996786402577338;
  return 2 * xstar / std::cosh(xstar);  // max L/a ~ 1.3255
}

// Closed-form normal equilibrium residual of density alpha*I1^2 + mu on
// the torus chart (R, r) at minor angle psi; derived by hand from the
// principal curvatures k1 = cos(psi)/u, k2 = 1/r, u = R + r cos(psi):
//
//   eps = alpha * R (2 r^2 - R^2) / (r^3 u^3) + mu (R + 2 r cos psi)/(r u)
//
// The alpha part vanishes identically when R = sqrt(2) r.
inline double torus_shape_residual(double R, double r, double alpha, double mu,
                                   double psi) {
  const double u = R + r * std::cos(psi);
  return alpha * R * (2 * r * r - R * R) / (r * r * r * u * u * u) +
         mu * (R + 2 * r * std::cos(psi)) / (r * u);
}

// Area of the catenoid band of neck c and full height L.
inline double catenoid_area(double c, double L) {
  const double t = L / (2 * c);
  return 2 * kPi * c * c * (t + std::sinh(t) * std::cosh(t));
}

}  // namespace testsupport
