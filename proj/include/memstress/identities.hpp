#pragma once

#include <string>
#include <vector>

#include "memstress/geometry.hpp"

namespace memstress {

// Structural identities of an embedded surface, evaluated as residual
// fields and reduced to norms.  On a smooth, correctly assembled bundle
// every residual is O(h^4); a corrupted embedding or an inconsistent
// bundle shows up as a spike.
//
// Each row compares quantities that reach the identity through different
// derivative routes, so agreement is evidence rather than construction.
// In particular the rows that involve the curvature pit the bundle's
// normal-derivative route (K_ab = e_a . d_b n) against the acceleration
// route (K_ab = -n . d_a e_b); checking the bundle curvature against the
// same d n it was contracted from would cancel to roundoff on symmetric
// charts and measure nothing.
//
// Audited identities:
//   tangent_constraint   e_a equals the grid derivative of X
//   orthogonality        e_a . n = 0
//   normalization        n . n = 1
//   weingarten           d_a n = K_a^c e_c   (K from the acceleration route)
//   gauss                d_a e_b = G^c_ab e_c - K_ab n   (K from d n)
//   gauss_codazzi        R_1212 = K_11 K_22 - K_12^2
//   codazzi_mainardi     grad_1 K_2c = grad_2 K_1c
//   sigma_model          g^ab d_a n . d_b n = K_ab K^ab   (right side from
//                        the acceleration route)
template <class S>
struct IdentityReport {
  struct Entry {
    std::string name;
    S max_residual;
    S l2_residual;
  };
  std::vector<Entry> entries;
  S h1, h2;
  int interior_margin;

  const Entry& find(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return e;
    throw ConfigError("identity report: no entry named " + name);
  }
};

template <class S>
IdentityReport<S> audit_identities(const EmbeddingField<S>& emb,
                                   const GeometryBundle<S>& b,
                                   int interior_margin = 4) {
  const Grid<S>& g = b.grid;
  const Index n = g.nodes();
  IdentityReport<S> report;
  report.h1 = g.h1;
  report.h2 = g.h2;
  report.interior_margin = interior_margin;

  auto push = [&](const std::string& name, const auto& field) {
    FieldNorms<S> norms = interior_norms(g, field, interior_margin);
    report.entries.push_back({name, norms.max, norms.l2});
  };

  // tangent constraint
  {
    Eigen::Matrix<S, Eigen::Dynamic, 2> r(n, 2);
    r.col(0) = (partial(g, emb.positions, 1) - b.tangent1).rowwise().norm();
    r.col(1) = (partial(g, emb.positions, 2) - b.tangent2).rowwise().norm();
    push("tangent_constraint", r);
  }

  // orthogonality and normalization
  {
    Eigen::Matrix<S, Eigen::Dynamic, 2> r(n, 2);
    r.col(0) = detail::rowwise_dot<S>(b.tangent1, b.normal);
    r.col(1) = detail::rowwise_dot<S>(b.tangent2, b.normal);
    push("orthogonality", r);
    ScalarField<S> nn =
        detail::rowwise_dot<S>(b.normal, b.normal) - S(1);
    push("normalization", nn);
  }

  // Tangent accelerations and the curvature they induce (the acceleration
  // route).  The mixed-derivative slot is symmetrized; its antisymmetric
  // part is pure finite-difference noise.
  const Vec3Field<S> d1e1 = partial(g, b.tangent1, 1);
  const Vec3Field<S> d1e2 = partial(g, b.tangent2, 1);
  const Vec3Field<S> d2e1 = partial(g, b.tangent1, 2);
  const Vec3Field<S> d2e2 = partial(g, b.tangent2, 2);
  Sym2Field<S> kacc(n, 3);
  kacc.col(0) = -detail::rowwise_dot<S>(b.normal, d1e1);
  kacc.col(1) = S(-0.5) * (detail::rowwise_dot<S>(b.normal, d1e2) +
                           detail::rowwise_dot<S>(b.normal, d2e1));
  kacc.col(2) = -detail::rowwise_dot<S>(b.normal, d2e2);

  // weingarten: d_a n - K_a^c e_c with the acceleration-route K
  {
    const auto gi11 = b.metric_inv.col(0).array();
    const auto gi12 = b.metric_inv.col(1).array();
    const auto gi22 = b.metric_inv.col(2).array();
    const auto k11 = kacc.col(0).array(), k12 = kacc.col(1).array(),
               k22 = kacc.col(2).array();
    ScalarField<S> m11 = k11 * gi11 + k12 * gi12;
    ScalarField<S> m12 = k11 * gi12 + k12 * gi22;
    ScalarField<S> m21 = k12 * gi11 + k22 * gi12;
    ScalarField<S> m22 = k12 * gi12 + k22 * gi22;
    Vec3Field<S> r1 =
        b.dnormal1 - (b.tangent1.array().colwise() * m11).matrix() -
        (b.tangent2.array().colwise() * m12).matrix();
    Vec3Field<S> r2 =
        b.dnormal2 - (b.tangent1.array().colwise() * m21).matrix() -
        (b.tangent2.array().colwise() * m22).matrix();
    Eigen::Matrix<S, Eigen::Dynamic, 2> r(n, 2);
    r.col(0) = r1.rowwise().norm();
    r.col(1) = r2.rowwise().norm();
    push("weingarten", r);
  }

  // gauss: d_a e_b - G^c_ab e_c + K_ab n with the bundle (d n) curvature
  {
    auto resid = [&](const Vec3Field<S>& deriv, int gcol1, int gcol2,
                     const ScalarField<S>& kab) -> ScalarField<S> {
      Vec3Field<S> r =
          deriv -
          (b.tangent1.array().colwise() * b.christoffel.col(gcol1).array())
              .matrix() -
          (b.tangent2.array().colwise() * b.christoffel.col(gcol2).array())
              .matrix() +
          (b.normal.array().colwise() * kab).matrix();
      return r.rowwise().norm().array();
    };
    ScalarField<S> k11 = b.curv.col(0).array();
    ScalarField<S> k12 = b.curv.col(1).array();
    ScalarField<S> k22 = b.curv.col(2).array();
    Eigen::Matrix<S, Eigen::Dynamic, 4> r(n, 4);
    r.col(0) = resid(d1e1, 0, 3, k11);
    r.col(1) = resid(d1e2, 1, 4, k12);
    r.col(2) = resid(d2e1, 1, 4, k12);
    r.col(3) = resid(d2e2, 2, 5, k22);
    push("gauss", r);
  }

  // gauss_codazzi: intrinsic R_1212 vs det K
  {
    const auto c = [&](int j) { return b.christoffel.col(j).array(); };
    ScalarField<S> d1_g1_22 =
        partial(g, ScalarField<S>(c(2)), 1);
    ScalarField<S> d2_g1_12 =
        partial(g, ScalarField<S>(c(1)), 2);
    ScalarField<S> d1_g2_22 =
        partial(g, ScalarField<S>(c(5)), 1);
    ScalarField<S> d2_g2_12 =
        partial(g, ScalarField<S>(c(4)), 2);
    ScalarField<S> r1_212 = d1_g1_22 - d2_g1_12 + c(0) * c(2) + c(1) * c(5) -
                            c(1) * c(1) - c(2) * c(4);
    ScalarField<S> r2_212 = d1_g2_22 - d2_g2_12 + c(3) * c(2) + c(4) * c(5) -
                            c(4) * c(1) - c(5) * c(4);
    ScalarField<S> riemann =
        b.metric.col(0).array() * r1_212 + b.metric.col(1).array() * r2_212;
    ScalarField<S> detk = b.curv.col(0).array() * b.curv.col(2).array() -
                          b.curv.col(1).array().square();
    push("gauss_codazzi", ScalarField<S>(riemann - detk));
  }

  // codazzi_mainardi: grad_1 K_2c - grad_2 K_1c
  {
    const auto c = [&](int j) { return b.christoffel.col(j).array(); };
    ScalarField<S> k11 = b.curv.col(0).array();
    ScalarField<S> k12 = b.curv.col(1).array();
    ScalarField<S> k22 = b.curv.col(2).array();
    ScalarField<S> d1k12 = partial(g, k12, 1);
    ScalarField<S> d2k11 = partial(g, k11, 2);
    ScalarField<S> d1k22 = partial(g, k22, 1);
    ScalarField<S> d2k12 = partial(g, k12, 2);
    Eigen::Matrix<S, Eigen::Dynamic, 2> r(n, 2);
    r.col(0) = d1k12 - d2k11 - c(0) * k12 - c(3) * k22 + c(1) * k11 +
               c(4) * k12;
    r.col(1) = d1k22 - d2k12 - c(1) * k12 - c(4) * k22 + c(2) * k11 +
               c(5) * k12;
    push("codazzi_mainardi", r);
  }

  // sigma_model: g^ab d_a n . d_b n - K_ab K^ab, the left side straight
  // from the normal derivatives, the right from the acceleration route
  {
    ScalarField<S> grad_sq =
        b.metric_inv.col(0).array() *
            detail::rowwise_dot<S>(b.dnormal1, b.dnormal1) +
        2 * b.metric_inv.col(1).array() *
            detail::rowwise_dot<S>(b.dnormal1, b.dnormal2) +
        b.metric_inv.col(2).array() *
            detail::rowwise_dot<S>(b.dnormal2, b.dnormal2);
    ScalarField<S> i2 = contract_pair(raise_sym2(b, kacc), kacc);
    push("sigma_model", ScalarField<S>(grad_sq - i2));
  }

  return report;
}

}  // namespace memstress
