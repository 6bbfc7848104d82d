#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "memstress/errors.hpp"
#include "memstress/types.hpp"

namespace memstress {

enum class Bc { periodic, clamped };

inline const char* to_string(Bc bc) {
  return bc == Bc::periodic ? "periodic" : "clamped";
}

// Structured parameter grid on [u1_min, u1_max] x [u2_min, u2_max].
//
// Periodic directions treat the interval as a circle: spacing is
// len / n and the last node is one spacing short of the far end (no
// duplicated seam node).  Clamped directions include both endpoints:
// spacing is len / (n - 1).
template <class S>
struct Grid {
  int n1 = 0, n2 = 0;
  S h1 = 0, h2 = 0;
  Bc bc1 = Bc::periodic, bc2 = Bc::periodic;
  S u1_min = 0, u1_max = 0, u2_min = 0, u2_max = 0;

  Index nodes() const { return Index(n1) * Index(n2); }
  Index idx(int i1, int i2) const { return Index(i1) * Index(n2) + Index(i2); }

  S u1(int i1) const { return u1_min + S(i1) * h1; }
  S u2(int i2) const { return u2_min + S(i2) * h2; }

  int count(int dir) const { return dir == 1 ? n1 : n2; }
  S spacing(int dir) const { return dir == 1 ? h1 : h2; }
  Bc bc(int dir) const { return dir == 1 ? bc1 : bc2; }

  // Quadrature weight along one direction.  Periodic directions use the
  // plain (spectrally accurate) trapezoid weight 1; clamped directions
  // use trapezoid weights with fourth-order Gregory end corrections
  // (3/8, 7/6, 23/24 at the three boundary nodes) so the quadrature
  // order matches the difference stencils.  Weights sum to n - 1, so
  // constants integrate exactly.
  S quad_weight(int dir, int i) const {
    if (bc(dir) == Bc::periodic) return S(1);
    const int edge = std::min(i, count(dir) - 1 - i);
    if (edge == 0) return S(3) / S(8);
    if (edge == 1) return S(7) / S(6);
    if (edge == 2) return S(23) / S(24);
    return S(1);
  }
};

inline constexpr int kMinNodesPerDirection = 8;

template <class S>
Grid<S> make_grid(S u1_min, S u1_max, S u2_min, S u2_max, int n1, int n2,
                  Bc bc1, Bc bc2) {
  auto check_count = [](int n, const char* name) {
    if (n < kMinNodesPerDirection)
      throw ConfigError(std::string("grid: ") + name + " = " +
                        std::to_string(n) + " is below the minimum of " +
                        std::to_string(kMinNodesPerDirection) +
                        " nodes per direction required by the radius-2 "
                        "difference stencils");
  };
  check_count(n1, "n1");
  check_count(n2, "n2");
  if (!(u1_max > u1_min) || !(u2_max > u2_min))
    throw ConfigError("grid: domain intervals must have positive length");

  Grid<S> g;
  g.n1 = n1;
  g.n2 = n2;
  g.bc1 = bc1;
  g.bc2 = bc2;
  g.u1_min = u1_min;
  g.u1_max = u1_max;
  g.u2_min = u2_min;
  g.u2_max = u2_max;
  g.h1 = (u1_max - u1_min) / S(bc1 == Bc::periodic ? n1 : n1 - 1);
  g.h2 = (u2_max - u2_min) / S(bc2 == Bc::periodic ? n2 : n2 - 1);
  return g;
}

// Visit nodes at least `margin` nodes away from clamped edges (periodic
// directions are never trimmed).
template <class S, class F>
void for_interior(const Grid<S>& g, int margin, F&& fn) {
  const int lo1 = g.bc1 == Bc::clamped ? margin : 0;
  const int hi1 = g.bc1 == Bc::clamped ? g.n1 - margin : g.n1;
  const int lo2 = g.bc2 == Bc::clamped ? margin : 0;
  const int hi2 = g.bc2 == Bc::clamped ? g.n2 - margin : g.n2;
  for (int i1 = lo1; i1 < hi1; ++i1)
    for (int i2 = lo2; i2 < hi2; ++i2) fn(g.idx(i1, i2));
}

template <class S>
struct FieldNorms {
  S max = 0;  // max over interior nodes and components of |value|
  S l2 = 0;   // root mean square over the same entries, so l2 <= max
};

// Norms of a per-node residual field (any number of columns) over the
// interior region.
template <class S, class Derived>
FieldNorms<S> interior_norms(const Grid<S>& g,
                             const Eigen::DenseBase<Derived>& field,
                             int margin) {
  FieldNorms<S> out;
  S sumsq = 0;
  Index count = 0;
  for_interior(g, margin, [&](Index i) {
    for (Index c = 0; c < field.cols(); ++c) {
      const S v = field(i, c);
      out.max = std::max(out.max, std::abs(v));
      sumsq += v * v;
    }
    count += field.cols();
  });
  if (count > 0) out.l2 = std::sqrt(sumsq / S(count));
  return out;
}

}  // namespace memstress
