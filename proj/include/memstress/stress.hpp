#pragma once

#include <cmath>
#include <string>

#include "memstress/energy.hpp"

namespace memstress {

// Surface stress decomposed in the frame (e_1, e_2, n):
//
//   f^a = f^ab e_b + fn^a n
//
// with the tangential part
//
//   f^ab = T^ab - H^ac K_c^b
//
// and the normal part
//
//   fn^a = -(div H)^a.
//
// world1 / world2 are the two stress vectors assembled in R^3.
template <class S>
struct StressField {
  Sym2Field<S> tangential;  // f^ab
  SurfVecField<S> normal;   // fn^a
  Vec3Field<S> world1, world2;
};

namespace detail {

template <class S>
void assemble_world(const GeometryBundle<S>& b, StressField<S>& f) {
  const auto t11 = f.tangential.col(0).array();
  const auto t12 = f.tangential.col(1).array();
  const auto t22 = f.tangential.col(2).array();
  const auto n1 = f.normal.col(0).array();
  const auto n2 = f.normal.col(1).array();
  f.world1 = (b.tangent1.array().colwise() * t11 +
              b.tangent2.array().colwise() * t12 +
              b.normal.array().colwise() * n1)
                 .matrix();
  f.world2 = (b.tangent1.array().colwise() * t12 +
              b.tangent2.array().colwise() * t22 +
              b.normal.array().colwise() * n2)
                 .matrix();
}

// P^ab = A^ac K_c^b for a symmetric upper tensor A (result symmetrized;
// the antisymmetric part is a roundoff-level artifact).
template <class S>
Sym2Field<S> contract_with_shape(const GeometryBundle<S>& b,
                                 const Sym2Field<S>& a) {
  const auto mixed = curv_mixed(b);  // (K_1^1, K_1^2, K_2^1, K_2^2)
  const auto a11 = a.col(0).array(), a12 = a.col(1).array(),
             a22 = a.col(2).array();
  Sym2Field<S> p(a.rows(), 3);
  p.col(0) = a11 * mixed.col(0).array() + a12 * mixed.col(2).array();
  ScalarField<S> p12 = a11 * mixed.col(1).array() + a12 * mixed.col(3).array();
  ScalarField<S> p21 = a12 * mixed.col(0).array() + a22 * mixed.col(2).array();
  p.col(1) = S(0.5) * (p12 + p21);
  p.col(2) = a12 * mixed.col(1).array() + a22 * mixed.col(3).array();
  return p;
}

}  // namespace detail

// Stress directly from the conjugate fields.
template <class S>
StressField<S> stress_from_conjugates(const GeometryBundle<S>& b,
                                      const ConjugateFields<S>& conj) {
  StressField<S> f;
  f.tangential =
      conj.metric_conjugate - detail::contract_with_shape(b, conj.curv_conjugate);
  f.normal = -cov_div_sym2(b, conj.curv_conjugate);
  detail::assemble_world(b, f);
  return f;
}

// Stress from the multiplier fields:
//
//   f^ab = L^ac K_c^b + 2 l^ab,   fn^a = -l_perp^a.
//
// Algebraically identical to stress_from_conjugates; kept as a separate
// route so the identification of the multipliers stays regression-tested.
template <class S>
StressField<S> stress_from_multipliers(const GeometryBundle<S>& b,
                                       const MultiplierField<S>& m) {
  StressField<S> f;
  f.tangential = detail::contract_with_shape(b, m.curv_multiplier) +
                 2 * m.metric_multiplier;
  f.normal = -m.orth_multiplier;
  detail::assemble_world(b, f);
  return f;
}

// Equilibrium residuals of a stress field.
//
//   shape       div(fn) - K_ab f^ab          (normal force balance)
//   tangential  (div f)^b + K_c^b fn^c       (tangential force balance)
//   direct_div  divergence of the world-frame stress vectors, computed
//               in conservation form per Cartesian component
template <class S>
struct ResidualField {
  ScalarField<S> shape;
  SurfVecField<S> tangential;
  Vec3Field<S> direct_div;
};

template <class S>
ResidualField<S> residuals(const GeometryBundle<S>& b,
                           const StressField<S>& f) {
  ResidualField<S> r;
  r.shape =
      cov_div_vector(b, f.normal) - contract_pair<S>(f.tangential, b.curv);

  const auto mixed = curv_mixed(b);
  const SurfVecField<S> divt = cov_div_sym2(b, f.tangential);
  r.tangential.resize(f.tangential.rows(), 2);
  r.tangential.col(0) = divt.col(0).array() +
                        f.normal.col(0).array() * mixed.col(0).array() +
                        f.normal.col(1).array() * mixed.col(2).array();
  r.tangential.col(1) = divt.col(1).array() +
                        f.normal.col(0).array() * mixed.col(1).array() +
                        f.normal.col(1).array() * mixed.col(3).array();

  r.direct_div.resize(f.tangential.rows(), 3);
  for (int c = 0; c < 3; ++c) {
    ScalarField<S> w1 = b.sqrt_g * f.world1.col(c).array();
    ScalarField<S> w2 = b.sqrt_g * f.world2.col(c).array();
    r.direct_div.col(c) =
        (partial(b.grid, w1, 1) + partial(b.grid, w2, 2)) / b.sqrt_g;
  }
  return r;
}

// Closed-form normal equilibrium residual of the bending-plus-tension
// model (density = alpha I1^2 + mu):
//
//   eps = -2 alpha lap(K) - alpha K (2 K_ab K^ab - K^2) + mu K,  K = I1.
//
// Independent of the stress assembly; used to cross-check the shape
// residual of the generic pipeline.
template <class S>
ScalarField<S> helfrich_shape_residual(const GeometryBundle<S>& b, S alpha,
                                       S mu) {
  const CurvInvariants<S> inv = curv_invariants(b);
  const ScalarField<S> lap = laplace_beltrami(b, inv.trace);
  return -2 * alpha * lap -
         alpha * inv.trace * (2 * inv.square - inv.trace.square()) +
         mu * inv.trace;
}

// Closed curve along one grid direction, at a fixed index of the other.
// side selects the conormal direction: plus points toward increasing
// values of the fixed coordinate.
enum class CurveSide { plus, minus };

struct CurveSpec {
  int along = 1;
  int fixed_index = 0;
  CurveSide side = CurveSide::plus;
};

// Total traction transmitted across the curve:  F = loop integral of
// eta_a f^a ds, with eta the outward unit conormal on the chosen side.
// Requires the run direction to be periodic (the curve must close).
template <class S>
Vec3<S> boundary_force(const GeometryBundle<S>& b, const StressField<S>& f,
                       const CurveSpec& curve) {
  const Grid<S>& g = b.grid;
  if (curve.along != 1 && curve.along != 2)
    throw ConfigError("boundary force: curve direction must be 1 or 2");
  if (g.bc(curve.along) != Bc::periodic)
    throw ConfigError(
        "boundary force: the curve runs along a clamped direction and does "
        "not close; choose the periodic direction");
  const int fixed_dir = curve.along == 1 ? 2 : 1;
  if (curve.fixed_index < 0 || curve.fixed_index >= g.count(fixed_dir))
    throw ConfigError("boundary force: fixed index " +
                      std::to_string(curve.fixed_index) +
                      " is outside the grid (0.." +
                      std::to_string(g.count(fixed_dir) - 1) + ")");

  const S sign = curve.side == CurveSide::plus ? S(1) : S(-1);
  const int nt = g.count(curve.along);
  Vec3<S> force = Vec3<S>::Zero();
  for (int k = 0; k < nt; ++k) {
    const Index i = curve.along == 1 ? g.idx(k, curve.fixed_index)
                                     : g.idx(curve.fixed_index, k);
    // eta has only the fixed-direction component: eta_m = sign / sqrt(g^mm)
    const S gmm_up =
        fixed_dir == 1 ? b.metric_inv(i, 0) : b.metric_inv(i, 2);
    const S eta_m = sign / std::sqrt(gmm_up);
    // line element along the run direction
    const S gtt = curve.along == 1 ? b.metric(i, 0) : b.metric(i, 2);
    const Vec3<S> fm =
        (fixed_dir == 1 ? f.world1.row(i) : f.world2.row(i)).transpose();
    force += eta_m * fm * std::sqrt(gtt) * g.spacing(curve.along);
  }
  return force;
}

}  // namespace memstress
