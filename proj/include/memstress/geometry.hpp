#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "memstress/fd.hpp"
#include "memstress/surfaces.hpp"

namespace memstress {

// Curvature sign convention.
//
// Tangents are e_a = d_a X, the unit normal is n = e1 x e2 / |e1 x e2|,
// and the extrinsic curvature is
//
//   K_ab = e_a . d_b n.
//
// With the catalog charts the normal points out of the enclosed volume,
// so the unit sphere has K_ab = g_ab / R and trace K = +2.  Much of the
// membrane literature uses the opposite sign; flip the orientation to
// compare.
enum class Orientation { standard, flipped };

template <class S>
struct GeometryBundle {
  Grid<S> grid;
  Vec3Field<S> tangent1, tangent2;   // e_a = d_a X
  Vec3Field<S> normal;               // unit normal
  Vec3Field<S> dnormal1, dnormal2;   // d_a n
  Sym2Field<S> metric;               // g_ab
  Sym2Field<S> metric_inv;           // g^ab
  ScalarField<S> sqrt_g;             // |e1 x e2| = sqrt(det g)
  Sym2Field<S> curv;                 // K_ab, symmetrized
  ScalarField<S> curv_asym;          // (e1.d2n - e2.d1n) / 2, discrete defect
  Eigen::Matrix<S, Eigen::Dynamic, 6> christoffel;
  // christoffel columns: G^1_11, G^1_12, G^1_22, G^2_11, G^2_12, G^2_22
};

namespace detail {

template <class S>
Vec3Field<S> rowwise_cross(const Vec3Field<S>& a, const Vec3Field<S>& b) {
  Vec3Field<S> c(a.rows(), 3);
  c.col(0) = a.col(1).cwiseProduct(b.col(2)) - a.col(2).cwiseProduct(b.col(1));
  c.col(1) = a.col(2).cwiseProduct(b.col(0)) - a.col(0).cwiseProduct(b.col(2));
  c.col(2) = a.col(0).cwiseProduct(b.col(1)) - a.col(1).cwiseProduct(b.col(0));
  return c;
}

template <class S>
ScalarField<S> rowwise_dot(const Vec3Field<S>& a, const Vec3Field<S>& b) {
  return a.cwiseProduct(b).rowwise().sum().array();
}

// Christoffel symbols of the second kind from the metric and its grid
// derivatives.
template <class S>
void fill_christoffel(GeometryBundle<S>& b) {
  const Grid<S>& g = b.grid;
  const Sym2Field<S> dg1 = partial(g, b.metric, 1);
  const Sym2Field<S> dg2 = partial(g, b.metric, 2);

  // t_d(ab) = d_a g_db + d_b g_da - d_d g_ab, column order (11, 12, 22)
  ScalarField<S> t1_11 = dg1.col(0).array();
  ScalarField<S> t2_11 = 2 * dg1.col(1).array() - dg2.col(0).array();
  ScalarField<S> t1_12 = dg2.col(0).array();
  ScalarField<S> t2_12 = dg1.col(2).array();
  ScalarField<S> t1_22 = 2 * dg2.col(1).array() - dg1.col(2).array();
  ScalarField<S> t2_22 = dg2.col(2).array();

  const auto gi11 = b.metric_inv.col(0).array();
  const auto gi12 = b.metric_inv.col(1).array();
  const auto gi22 = b.metric_inv.col(2).array();

  b.christoffel.resize(g.nodes(), 6);
  b.christoffel.col(0) = S(0.5) * (gi11 * t1_11 + gi12 * t2_11);
  b.christoffel.col(1) = S(0.5) * (gi11 * t1_12 + gi12 * t2_12);
  b.christoffel.col(2) = S(0.5) * (gi11 * t1_22 + gi12 * t2_22);
  b.christoffel.col(3) = S(0.5) * (gi12 * t1_11 + gi22 * t2_11);
  b.christoffel.col(4) = S(0.5) * (gi12 * t1_12 + gi22 * t2_12);
  b.christoffel.col(5) = S(0.5) * (gi12 * t1_22 + gi22 * t2_22);
}

template <class S>
void fill_from_tangents(GeometryBundle<S>& b, Orientation orient) {
  const Grid<S>& g = b.grid;
  Vec3Field<S> cross = rowwise_cross<S>(b.tangent1, b.tangent2);
  if (orient == Orientation::flipped) cross = -cross;

  ScalarField<S> norm = cross.rowwise().norm().array();
  if (!norm.allFinite())
    throw ImmersionError("geometry: non-finite tangent data");

  std::vector<S> sorted(norm.data(), norm.data() + norm.size());
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                   sorted.end());
  const S eps_det = S(1e-12) * sorted[sorted.size() / 2];
  Index worst = 0;
  norm.minCoeff(&worst);
  if (norm(worst) <= eps_det) {
    const int i1 = int(worst / g.n2), i2 = int(worst % g.n2);
    throw ImmersionError(
        "geometry: degenerate tangent plane at node (" + std::to_string(i1) +
        ", " + std::to_string(i2) +
        "): |e1 x e2| = " + std::to_string(double(norm(worst))));
  }

  b.sqrt_g = norm;
  b.normal = cross.array().colwise() / norm;

  b.metric.resize(g.nodes(), 3);
  b.metric.col(0) = rowwise_dot<S>(b.tangent1, b.tangent1);
  b.metric.col(1) = rowwise_dot<S>(b.tangent1, b.tangent2);
  b.metric.col(2) = rowwise_dot<S>(b.tangent2, b.tangent2);

  ScalarField<S> det = b.metric.col(0).array() * b.metric.col(2).array() -
                       b.metric.col(1).array().square();
  b.metric_inv.resize(g.nodes(), 3);
  b.metric_inv.col(0) = b.metric.col(2).array() / det;
  b.metric_inv.col(1) = -b.metric.col(1).array() / det;
  b.metric_inv.col(2) = b.metric.col(0).array() / det;

  b.dnormal1 = partial(g, b.normal, 1);
  b.dnormal2 = partial(g, b.normal, 2);

  ScalarField<S> k11 = rowwise_dot<S>(b.tangent1, b.dnormal1);
  ScalarField<S> k12 = rowwise_dot<S>(b.tangent1, b.dnormal2);
  ScalarField<S> k21 = rowwise_dot<S>(b.tangent2, b.dnormal1);
  ScalarField<S> k22 = rowwise_dot<S>(b.tangent2, b.dnormal2);
  b.curv.resize(g.nodes(), 3);
  b.curv.col(0) = k11;
  b.curv.col(1) = S(0.5) * (k12 + k21);
  b.curv.col(2) = k22;
  b.curv_asym = S(0.5) * (k12 - k21);

  fill_christoffel(b);
}

}  // namespace detail

// Induced geometry of an embedded grid, all derivatives by finite
// differences.
template <class S>
GeometryBundle<S> geometry_bundle(const EmbeddingField<S>& emb,
                                  Orientation orient = Orientation::standard) {
  if (!emb.positions.allFinite())
    throw ImmersionError("geometry: embedding has non-finite components");
  if (emb.positions.rows() != emb.grid.nodes())
    throw ConfigError("geometry: embedding row count does not match grid");
  GeometryBundle<S> b;
  b.grid = emb.grid;
  b.tangent1 = partial(emb.grid, emb.positions, 1);
  b.tangent2 = partial(emb.grid, emb.positions, 2);
  detail::fill_from_tangents(b, orient);
  return b;
}

// Exact geometry for charts with closed-form curvature; used as a
// reference in tests and available for sphere_band, cylinder and torus.
template <class S>
GeometryBundle<S> analytic_bundle(const SurfaceSpec<S>& spec,
                                  const Grid<S>& grid,
                                  Orientation orient = Orientation::standard) {
  validate(spec);
  check_compatible(spec, grid);
  const S flip = orient == Orientation::flipped ? S(-1) : S(1);

  GeometryBundle<S> b;
  b.grid = grid;
  const Index n = grid.nodes();
  b.tangent1.resize(n, 3);
  b.tangent2.resize(n, 3);
  b.normal.resize(n, 3);
  b.dnormal1.resize(n, 3);
  b.dnormal2.resize(n, 3);
  b.metric.resize(n, 3);
  b.metric_inv.resize(n, 3);
  b.sqrt_g.resize(n);
  b.curv.resize(n, 3);
  b.curv_asym = ScalarField<S>::Zero(n);
  b.christoffel.resize(n, 6);
  b.christoffel.setZero();

  using std::cos;
  using std::sin;
  for (int i1 = 0; i1 < grid.n1; ++i1) {
    for (int i2 = 0; i2 < grid.n2; ++i2) {
      const Index i = grid.idx(i1, i2);
      const S p = grid.u1(i1), q = grid.u2(i2);
      switch (spec.kind) {
        case SurfaceKind::sphere_band: {
          const S R = spec.radius;
          b.tangent1.row(i) << -R * sin(q) * sin(p), R * sin(q) * cos(p), S(0);
          b.tangent2.row(i) << R * cos(q) * cos(p), R * cos(q) * sin(p),
              R * sin(q);
          b.normal.row(i) << sin(q) * cos(p), sin(q) * sin(p), -cos(q);
          b.metric.row(i) << R * R * sin(q) * sin(q), S(0), R * R;
          b.curv.row(i) << R * sin(q) * sin(q), S(0), R;
          b.christoffel(i, 1) = cos(q) / sin(q);
          b.christoffel(i, 3) = -sin(q) * cos(q);
          break;
        }
        case SurfaceKind::cylinder: {
          const S rho = spec.radius;
          b.tangent1.row(i) << -rho * sin(p), rho * cos(p), S(0);
          b.tangent2.row(i) << S(0), S(0), S(1);
          b.normal.row(i) << cos(p), sin(p), S(0);
          b.metric.row(i) << rho * rho, S(0), S(1);
          b.curv.row(i) << rho, S(0), S(0);
          break;
        }
        case SurfaceKind::torus: {
          const S R = spec.major_radius, r = spec.minor_radius;
          const S w = R + r * cos(q);
          b.tangent1.row(i) << -w * sin(p), w * cos(p), S(0);
          b.tangent2.row(i) << -r * sin(q) * cos(p), -r * sin(q) * sin(p),
              r * cos(q);
          b.normal.row(i) << cos(q) * cos(p), cos(q) * sin(p), sin(q);
          b.metric.row(i) << w * w, S(0), r * r;
          b.curv.row(i) << w * cos(q), S(0), r;
          b.christoffel(i, 1) = -r * sin(q) / w;
          b.christoffel(i, 3) = w * sin(q) / r;
          break;
        }
        default:
          throw ConfigError(
              std::string("analytic geometry is not available for ") +
              to_string(spec.kind));
      }
      b.normal.row(i) *= flip;
      b.curv.row(i) *= flip;
      b.metric_inv.row(i) << S(1) / b.metric(i, 0), S(0), S(1) / b.metric(i, 2);
      b.sqrt_g(i) = std::sqrt(b.metric(i, 0) * b.metric(i, 2));
      // d_a n = K_a^c e_c for these diagonal-metric charts
      b.dnormal1.row(i) =
          (b.curv(i, 0) / b.metric(i, 0)) * b.tangent1.row(i);
      b.dnormal2.row(i) =
          (b.curv(i, 2) / b.metric(i, 2)) * b.tangent2.row(i);
    }
  }
  return b;
}

// --- pointwise tensor algebra -------------------------------------------

// g^ab t_ab for a symmetric lower-index tensor.
template <class S>
ScalarField<S> trace_lower(const GeometryBundle<S>& b, const Sym2Field<S>& t) {
  return b.metric_inv.col(0).array() * t.col(0).array() +
         2 * b.metric_inv.col(1).array() * t.col(1).array() +
         b.metric_inv.col(2).array() * t.col(2).array();
}

// a^ab b_ab (one factor upper, one lower, both symmetric).
template <class S>
ScalarField<S> contract_pair(const Sym2Field<S>& up, const Sym2Field<S>& lo) {
  return up.col(0).array() * lo.col(0).array() +
         2 * up.col(1).array() * lo.col(1).array() +
         up.col(2).array() * lo.col(2).array();
}

// Raise both indices of a symmetric lower tensor: t^ab = g^ac g^bd t_cd.
template <class S>
Sym2Field<S> raise_sym2(const GeometryBundle<S>& b, const Sym2Field<S>& t) {
  const auto gi11 = b.metric_inv.col(0).array();
  const auto gi12 = b.metric_inv.col(1).array();
  const auto gi22 = b.metric_inv.col(2).array();
  const auto t11 = t.col(0).array(), t12 = t.col(1).array(),
             t22 = t.col(2).array();
  Sym2Field<S> up(t.rows(), 3);
  up.col(0) = gi11 * gi11 * t11 + 2 * gi11 * gi12 * t12 + gi12 * gi12 * t22;
  up.col(1) = gi11 * gi12 * t11 + (gi11 * gi22 + gi12 * gi12) * t12 +
              gi12 * gi22 * t22;
  up.col(2) = gi12 * gi12 * t11 + 2 * gi12 * gi22 * t12 + gi22 * gi22 * t22;
  return up;
}

// Lower both indices of a symmetric upper tensor: t_ab = g_ac g_bd t^cd.
template <class S>
Sym2Field<S> lower_sym2(const GeometryBundle<S>& b, const Sym2Field<S>& t) {
  const auto g11 = b.metric.col(0).array();
  const auto g12 = b.metric.col(1).array();
  const auto g22 = b.metric.col(2).array();
  const auto t11 = t.col(0).array(), t12 = t.col(1).array(),
             t22 = t.col(2).array();
  Sym2Field<S> lo(t.rows(), 3);
  lo.col(0) = g11 * g11 * t11 + 2 * g11 * g12 * t12 + g12 * g12 * t22;
  lo.col(1) =
      g11 * g12 * t11 + (g11 * g22 + g12 * g12) * t12 + g12 * g22 * t22;
  lo.col(2) = g12 * g12 * t11 + 2 * g12 * g22 * t12 + g22 * g22 * t22;
  return lo;
}

// Mixed curvature K_a^b = K_ac g^cb, returned as columns
// (K_1^1, K_1^2, K_2^1, K_2^2).
template <class S>
Eigen::Matrix<S, Eigen::Dynamic, 4> curv_mixed(const GeometryBundle<S>& b) {
  const auto gi11 = b.metric_inv.col(0).array();
  const auto gi12 = b.metric_inv.col(1).array();
  const auto gi22 = b.metric_inv.col(2).array();
  const auto k11 = b.curv.col(0).array(), k12 = b.curv.col(1).array(),
             k22 = b.curv.col(2).array();
  Eigen::Matrix<S, Eigen::Dynamic, 4> m(b.curv.rows(), 4);
  m.col(0) = k11 * gi11 + k12 * gi12;
  m.col(1) = k11 * gi12 + k12 * gi22;
  m.col(2) = k12 * gi11 + k22 * gi12;
  m.col(3) = k12 * gi12 + k22 * gi22;
  return m;
}

// Scalar invariants of the curvature: I1 = g^ab K_ab (trace) and
// I2 = K_ab K^ab.
template <class S>
struct CurvInvariants {
  ScalarField<S> trace;
  ScalarField<S> square;
};

template <class S>
CurvInvariants<S> curv_invariants(const GeometryBundle<S>& b) {
  CurvInvariants<S> inv;
  inv.trace = trace_lower(b, b.curv);
  inv.square = contract_pair(raise_sym2(b, b.curv), b.curv);
  return inv;
}

// --- covariant differential operators ------------------------------------

// Gradient of a scalar (components d_a phi; the lower-index covariant
// derivative of a scalar is the plain partial derivative).
template <class S>
SurfVecField<S> cov_grad_scalar(const Grid<S>& g, const ScalarField<S>& phi) {
  SurfVecField<S> out(phi.rows(), 2);
  out.col(0) = partial(g, phi, 1).matrix();
  out.col(1) = partial(g, phi, 2).matrix();
  return out;
}

// Covariant divergence of a vector field (upper components):
// div v = (1/sqrt g) d_a (sqrt g v^a).
template <class S>
ScalarField<S> cov_div_vector(const GeometryBundle<S>& b,
                              const SurfVecField<S>& v) {
  ScalarField<S> w1 = b.sqrt_g * v.col(0).array();
  ScalarField<S> w2 = b.sqrt_g * v.col(1).array();
  return (partial(b.grid, w1, 1) + partial(b.grid, w2, 2)) / b.sqrt_g;
}

// Covariant divergence of a symmetric upper tensor:
// (div t)^b = d_a t^ab + G^a_ac t^cb + G^b_ac t^ac.
template <class S>
SurfVecField<S> cov_div_sym2(const GeometryBundle<S>& b,
                             const Sym2Field<S>& t) {
  const Grid<S>& g = b.grid;
  ScalarField<S> d1t11 = partial(g, ScalarField<S>(t.col(0).array()), 1);
  ScalarField<S> d1t12 = partial(g, ScalarField<S>(t.col(1).array()), 1);
  ScalarField<S> d2t12 = partial(g, ScalarField<S>(t.col(1).array()), 2);
  ScalarField<S> d2t22 = partial(g, ScalarField<S>(t.col(2).array()), 2);

  const auto c = [&](int j) { return b.christoffel.col(j).array(); };
  // contracted symbols G^a_{a c}
  ScalarField<S> trace1 = c(0) + c(4);  // G^1_11 + G^2_21
  ScalarField<S> trace2 = c(1) + c(5);  // G^1_12 + G^2_22

  const auto t11 = t.col(0).array(), t12 = t.col(1).array(),
             t22 = t.col(2).array();

  SurfVecField<S> out(t.rows(), 2);
  out.col(0) = d1t11 + d2t12 + trace1 * t11 + trace2 * t12 + c(0) * t11 +
               2 * c(1) * t12 + c(2) * t22;
  out.col(1) = d1t12 + d2t22 + trace1 * t12 + trace2 * t22 + c(3) * t11 +
               2 * c(4) * t12 + c(5) * t22;
  return out;
}

// Laplace-Beltrami operator:
// lap phi = (1/sqrt g) d_a (sqrt g g^ab d_b phi).
template <class S>
ScalarField<S> laplace_beltrami(const GeometryBundle<S>& b,
                                const ScalarField<S>& phi) {
  ScalarField<S> d1 = partial(b.grid, phi, 1);
  ScalarField<S> d2 = partial(b.grid, phi, 2);
  ScalarField<S> w1 =
      b.sqrt_g * (b.metric_inv.col(0).array() * d1 +
                  b.metric_inv.col(1).array() * d2);
  ScalarField<S> w2 =
      b.sqrt_g * (b.metric_inv.col(1).array() * d1 +
                  b.metric_inv.col(2).array() * d2);
  return (partial(b.grid, w1, 1) + partial(b.grid, w2, 2)) / b.sqrt_g;
}

}  // namespace memstress
