#pragma once

#include <array>

#include "memstress/grid.hpp"
#include "memstress/types.hpp"

namespace memstress {

// Fourth-order finite differences on the structured grid.
//
// Interior and periodic nodes use the centered five-point stencil
//   f' = (f[-2] - 8 f[-1] + 8 f[+1] - f[+2]) / (12 h).
// The two rows nearest a clamped edge fall back to one-sided five-point
// stencils of the same order, so the scheme is uniformly fourth order
// and exact on polynomials of degree <= 4.

namespace detail {

struct StencilTap {
  int off;
  double w;  // numerator weight; divide by 12 h
};

using Stencil = std::array<StencilTap, 5>;

inline constexpr Stencil kCentral = {
    {{-2, 1}, {-1, -8}, {1, 8}, {2, -1}, {0, 0}}};
inline constexpr Stencil kEdge0 = {
    {{0, -25}, {1, 48}, {2, -36}, {3, 16}, {4, -3}}};
inline constexpr Stencil kEdge1 = {
    {{-1, -3}, {0, -10}, {1, 18}, {2, -6}, {3, 1}}};
inline constexpr Stencil kEdgeN2 = {
    {{-3, -1}, {-2, 6}, {-1, -18}, {0, 10}, {1, 3}}};
inline constexpr Stencil kEdgeN1 = {
    {{-4, 3}, {-3, -16}, {-2, 36}, {-1, -48}, {0, 25}}};

inline const Stencil& stencil_for(int k, int n, Bc bc) {
  if (bc == Bc::periodic) return kCentral;
  if (k == 0) return kEdge0;
  if (k == 1) return kEdge1;
  if (k == n - 2) return kEdgeN2;
  if (k == n - 1) return kEdgeN1;
  return kCentral;
}

}  // namespace detail

// Partial derivative of a per-node field along grid direction dir (1 or 2).
// Accepts any field with one row per node; returns a field of the same shape.
template <class S, class Derived>
typename Derived::PlainObject partial(const Grid<S>& g,
                                      const Eigen::DenseBase<Derived>& field,
                                      int dir) {
  if (dir != 1 && dir != 2) throw ConfigError("partial: dir must be 1 or 2");
  decltype(auto) f = field.derived().eval();
  typename Derived::PlainObject out(f.rows(), f.cols());

  const int n = g.count(dir);
  const Bc bc = g.bc(dir);
  const S inv12h = S(1) / (S(12) * g.spacing(dir));
  const Index ncols = f.cols();

  for (int i1 = 0; i1 < g.n1; ++i1) {
    for (int i2 = 0; i2 < g.n2; ++i2) {
      const Index row = g.idx(i1, i2);
      const int k = dir == 1 ? i1 : i2;
      const detail::Stencil& st = detail::stencil_for(k, n, bc);
      for (Index c = 0; c < ncols; ++c) {
        // Each stencil's weights sum to zero, so taps apply to the offset
        // from the center value.  Constant runs then cancel exactly instead
        // of leaving rounding residue from the non-dyadic edge weights.
        const S base = f(row, c);
        S acc = 0;
        for (const auto& tap : st) {
          if (tap.w == 0) continue;
          int kk = k + tap.off;
          if (bc == Bc::periodic) kk = (kk % n + n) % n;
          const Index src = dir == 1 ? g.idx(kk, i2) : g.idx(i1, kk);
          acc += S(tap.w) * (f(src, c) - base);
        }
        out(row, c) = acc * inv12h;
      }
    }
  }
  return out;
}

}  // namespace memstress
