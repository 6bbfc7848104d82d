#pragma once

#include <cmath>
#include <string>

#include "memstress/grid.hpp"
#include "memstress/types.hpp"

namespace memstress {

// Catalog of parametric charts.  All angular charts run the periodic
// coordinate u1 over the full circle; u2 is the axial / polar / second
// angular coordinate.  Orientations are chosen so that the normal
// (tangent1 x tangent2) / |...| points out of the enclosed volume.
enum class SurfaceKind {
  sphere_band,     // sphere of radius R, polar caps of angle theta0 removed
  cylinder,        // radius rho, full length L, axis z
  catenoid,        // neck radius c, full length L, axis z
  torus,           // major radius R, minor radius r
  ellipsoid_band,  // semi-axes ax, ay, az, polar caps removed
  graph,           // z = amplitude * sin(kx u) * sin(ky v) over the (u,v) plane
};

inline const char* to_string(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::sphere_band: return "sphere_band";
    case SurfaceKind::cylinder: return "cylinder";
    case SurfaceKind::catenoid: return "catenoid";
    case SurfaceKind::torus: return "torus";
    case SurfaceKind::ellipsoid_band: return "ellipsoid_band";
    case SurfaceKind::graph: return "graph";
  }
  return "?";
}

template <class S>
struct SurfaceSpec {
  SurfaceKind kind = SurfaceKind::sphere_band;

  S radius = 1;        // sphere_band R, cylinder rho
  S theta0 = S(0.3);   // band margin of sphere_band / ellipsoid_band
  S length = 1;        // full axial extent of cylinder / catenoid
  S neck = 1;          // catenoid waist radius
  S major_radius = 2;  // torus R
  S minor_radius = 1;  // torus r
  S ax = 1, ay = 1, az = 1;  // ellipsoid semi-axes
  S amplitude = 0;     // graph height scale
  S kx = 1, ky = 1;    // graph wave numbers

  static SurfaceSpec sphere_band(S R, S theta0) {
    SurfaceSpec s;
    s.kind = SurfaceKind::sphere_band;
    s.radius = R;
    s.theta0 = theta0;
    return s;
  }
  static SurfaceSpec cylinder(S rho, S L) {
    SurfaceSpec s;
    s.kind = SurfaceKind::cylinder;
    s.radius = rho;
    s.length = L;
    return s;
  }
  static SurfaceSpec catenoid(S c, S L) {
    SurfaceSpec s;
    s.kind = SurfaceKind::catenoid;
    s.neck = c;
    s.length = L;
    return s;
  }
  static SurfaceSpec torus(S R, S r) {
    SurfaceSpec s;
    s.kind = SurfaceKind::torus;
    s.major_radius = R;
    s.minor_radius = r;
    return s;
  }
  static SurfaceSpec ellipsoid_band(S ax, S ay, S az, S theta0) {
    SurfaceSpec s;
    s.kind = SurfaceKind::ellipsoid_band;
    s.ax = ax;
    s.ay = ay;
    s.az = az;
    s.theta0 = theta0;
    return s;
  }
  static SurfaceSpec graph(S amplitude, S kx, S ky) {
    SurfaceSpec s;
    s.kind = SurfaceKind::graph;
    s.amplitude = amplitude;
    s.kx = kx;
    s.ky = ky;
    return s;
  }
};

namespace detail {
template <class S>
constexpr S pi() {
  return S(3.14159265358979323846264338327950288L);
}
}  // namespace detail

template <class S>
void validate(const SurfaceSpec<S>& spec) {
  auto positive = [](S v, const char* name) {
    if (!(v > S(0)) || !std::isfinite(v))
      throw ConfigError(std::string("surface: parameter ") + name +
                        " must be positive and finite");
  };
  const S pi = detail::pi<S>();
  switch (spec.kind) {
    case SurfaceKind::sphere_band:
      positive(spec.radius, "R");
      if (!(spec.theta0 > S(0) && spec.theta0 < pi / 2))
        throw ConfigError("surface: theta0 must lie in (0, pi/2)");
      break;
    case SurfaceKind::cylinder:
      positive(spec.radius, "rho");
      positive(spec.length, "L");
      break;
    case SurfaceKind::catenoid:
      positive(spec.neck, "c");
      positive(spec.length, "L");
      break;
    case SurfaceKind::torus:
      positive(spec.major_radius, "R");
      positive(spec.minor_radius, "r");
      if (!(spec.major_radius > spec.minor_radius))
        throw ConfigError("surface: torus requires R > r");
      break;
    case SurfaceKind::ellipsoid_band:
      positive(spec.ax, "a");
      positive(spec.ay, "b");
      positive(spec.az, "c");
      if (!(spec.theta0 > S(0) && spec.theta0 < pi / 2))
        throw ConfigError("surface: theta0 must lie in (0, pi/2)");
      break;
    case SurfaceKind::graph:
      if (!std::isfinite(spec.amplitude) || !std::isfinite(spec.kx) ||
          !std::isfinite(spec.ky))
        throw ConfigError("surface: graph parameters must be finite");
      break;
  }
}

template <class S>
Vec3<S> position(const SurfaceSpec<S>& spec, S u1, S u2) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  switch (spec.kind) {
    case SurfaceKind::sphere_band: {
      // u2 runs from the south pole; normal = X / R points outward.
      const S R = spec.radius;
      return Vec3<S>(R * sin(u2) * cos(u1), R * sin(u2) * sin(u1),
                     -R * cos(u2));
    }
    case SurfaceKind::cylinder:
      return Vec3<S>(spec.radius * cos(u1), spec.radius * sin(u1), u2);
    case SurfaceKind::catenoid: {
      const S w = spec.neck * cosh(u2 / spec.neck);
      return Vec3<S>(w * cos(u1), w * sin(u1), u2);
    }
    case SurfaceKind::torus: {
      const S w = spec.major_radius + spec.minor_radius * cos(u2);
      return Vec3<S>(w * cos(u1), w * sin(u1), spec.minor_radius * sin(u2));
    }
    case SurfaceKind::ellipsoid_band:
      return Vec3<S>(spec.ax * sin(u2) * cos(u1), spec.ay * sin(u2) * sin(u1),
                     -spec.az * cos(u2));
    case SurfaceKind::graph:
      return Vec3<S>(u1, u2,
                     spec.amplitude * sin(spec.kx * u1) * sin(spec.ky * u2));
  }
  return Vec3<S>::Zero();
}

template <class S>
struct Domain {
  S u1_min, u1_max, u2_min, u2_max;
};

template <class S>
Domain<S> default_domain(const SurfaceSpec<S>& spec) {
  const S pi = detail::pi<S>();
  switch (spec.kind) {
    case SurfaceKind::sphere_band:
    case SurfaceKind::ellipsoid_band:
      return {S(0), 2 * pi, spec.theta0, pi - spec.theta0};
    case SurfaceKind::cylinder:
    case SurfaceKind::catenoid:
      return {S(0), 2 * pi, -spec.length / 2, spec.length / 2};
    case SurfaceKind::torus:
      return {S(0), 2 * pi, S(0), 2 * pi};
    case SurfaceKind::graph:
      return {S(0), 2 * pi, S(0), 2 * pi};
  }
  return {S(0), 1, S(0), 1};
}

template <class S>
std::pair<Bc, Bc> default_bc(const SurfaceSpec<S>& spec) {
  switch (spec.kind) {
    case SurfaceKind::torus:
      return {Bc::periodic, Bc::periodic};
    case SurfaceKind::graph:
      return {Bc::clamped, Bc::clamped};
    default:
      return {Bc::periodic, Bc::clamped};
  }
}

template <class S>
Grid<S> make_default_grid(const SurfaceSpec<S>& spec, int n1, int n2) {
  const Domain<S> d = default_domain(spec);
  const auto [bc1, bc2] = default_bc(spec);
  return make_grid(d.u1_min, d.u1_max, d.u2_min, d.u2_max, n1, n2, bc1, bc2);
}

// Check that the grid's boundary conditions and domain are legal for the
// chart: a direction may be periodic only where the chart actually closes.
template <class S>
void check_compatible(const SurfaceSpec<S>& spec, const Grid<S>& grid) {
  const S pi = detail::pi<S>();
  const S tau = 2 * pi;
  auto full_circle = [&](S lo, S hi) {
    return std::abs((hi - lo) - tau) <= S(1e-12) * tau;
  };
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("surface/grid mismatch: " + what);
  };

  switch (spec.kind) {
    case SurfaceKind::torus:
      require(grid.bc1 == Bc::periodic && grid.bc2 == Bc::periodic,
              "torus closes in both directions; both bc must be periodic");
      require(full_circle(grid.u1_min, grid.u1_max) &&
                  full_circle(grid.u2_min, grid.u2_max),
              "torus chart is periodic only over a full 2*pi interval in "
              "each direction");
      break;
    case SurfaceKind::sphere_band:
    case SurfaceKind::ellipsoid_band:
      require(grid.bc1 == Bc::periodic && grid.bc2 == Bc::clamped,
              std::string(to_string(spec.kind)) +
                  " requires bc (periodic, clamped)");
      require(full_circle(grid.u1_min, grid.u1_max),
              "angular direction must cover a full 2*pi interval");
      require(grid.u2_min > S(0) && grid.u2_max < pi,
              "band polar interval must stay inside (0, pi)");
      break;
    case SurfaceKind::cylinder:
    case SurfaceKind::catenoid:
      require(grid.bc1 == Bc::periodic && grid.bc2 == Bc::clamped,
              std::string(to_string(spec.kind)) +
                  " requires bc (periodic, clamped)");
      require(full_circle(grid.u1_min, grid.u1_max),
              "angular direction must cover a full 2*pi interval");
      break;
    case SurfaceKind::graph: {
      // A periodic direction is legal only if the height function repeats
      // over the chosen interval.
      auto periodic_ok = [&](S k, S lo, S hi) {
        if (spec.amplitude == S(0)) return true;
        const S cycles = k * (hi - lo) / tau;
        return std::abs(cycles - std::round(cycles)) < S(1e-9);
      };
      if (grid.bc1 == Bc::periodic)
        require(periodic_ok(spec.kx, grid.u1_min, grid.u1_max),
                "graph height is not periodic over the u1 interval");
      if (grid.bc2 == Bc::periodic)
        require(periodic_ok(spec.ky, grid.u2_min, grid.u2_max),
                "graph height is not periodic over the u2 interval");
      break;
    }
  }
}

// Embedding X: grid -> R^3, one position per node.
template <class S>
struct EmbeddingField {
  Grid<S> grid;
  Vec3Field<S> positions;
};

template <class S>
EmbeddingField<S> sample_surface(const SurfaceSpec<S>& spec,
                                 const Grid<S>& grid) {
  validate(spec);
  check_compatible(spec, grid);
  EmbeddingField<S> emb;
  emb.grid = grid;
  emb.positions.resize(grid.nodes(), 3);
  for (int i1 = 0; i1 < grid.n1; ++i1)
    for (int i2 = 0; i2 < grid.n2; ++i2)
      emb.positions.row(grid.idx(i1, i2)) =
          position(spec, grid.u1(i1), grid.u2(i2)).transpose();
  if (!emb.positions.allFinite())
    throw ConfigError("surface: sampled embedding has non-finite components");
  return emb;
}

}  // namespace memstress
