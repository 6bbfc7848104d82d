#pragma once

#include <Eigen/Dense>

namespace memstress {

using Index = Eigen::Index;

// Per-node fields are stored columnar: one row per grid node, nodes in
// row-major order (node = i1 * n2 + i2).
template <class S>
using ScalarField = Eigen::Array<S, Eigen::Dynamic, 1>;

// One R^3 vector per node (embedding positions, tangents, normals).
template <class S>
using Vec3Field = Eigen::Matrix<S, Eigen::Dynamic, 3>;

// Symmetric rank-2 surface tensor per node, components (11, 12, 22).
template <class S>
using Sym2Field = Eigen::Matrix<S, Eigen::Dynamic, 3>;

// Surface vector (2 components) per node.
template <class S>
using SurfVecField = Eigen::Matrix<S, Eigen::Dynamic, 2>;

template <class S>
using Vec3 = Eigen::Matrix<S, 3, 1>;

template <class S>
using Vec2 = Eigen::Matrix<S, 2, 1>;

template <class S>
using Mat2 = Eigen::Matrix<S, 2, 2>;

template <class S>
Mat2<S> sym2_at(const Sym2Field<S>& f, Index i) {
  Mat2<S> m;
  m << f(i, 0), f(i, 1), f(i, 1), f(i, 2);
  return m;
}

template <class S>
void set_sym2(Sym2Field<S>& f, Index i, const Mat2<S>& m) {
  f(i, 0) = m(0, 0);
  f(i, 1) = S(0.5) * (m(0, 1) + m(1, 0));
  f(i, 2) = m(1, 1);
}

// x^k for k >= 0 with the convention 0^0 = 1.
template <class S>
S pow_int(S x, int k) {
  S r = S(1);
  for (int j = 0; j < k; ++j) r *= x;
  return r;
}

}  // namespace memstress
