#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "memstress/geometry.hpp"

namespace memstress {

// Curvature energy density as a polynomial in the two curvature
// invariants I1 = g^ab K_ab and I2 = K_ab K^ab:
//
//   density = sum_terms  coeff * I1^p * I2^q
//
// Bending rigidity enters through the quadratic terms, surface tension
// through the constant term.
template <class S>
struct EnergyTerm {
  S coeff;
  int p;
  int q;
};

template <class S>
struct EnergyModel {
  std::vector<EnergyTerm<S>> terms;

  // tension only: density = mu
  static EnergyModel soap_film(S mu) { return {{{mu, 0, 0}}}; }

  // pure squared mean curvature: density = alpha * I1^2
  static EnergyModel willmore(S alpha) { return {{{alpha, 2, 0}}}; }

  // bending plus tension: density = alpha * I1^2 + mu
  static EnergyModel helfrich(S alpha, S mu) {
    return {{{alpha, 2, 0}, {mu, 0, 0}}};
  }
};

template <class S>
void validate(const EnergyModel<S>& model) {
  if (model.terms.empty())
    throw ConfigError("energy model: at least one term is required");
  for (const auto& t : model.terms) {
    if (!std::isfinite(t.coeff))
      throw ConfigError("energy model: coefficient must be finite");
    if (t.p < 0 || t.q < 0)
      throw ConfigError("energy model: exponents must be non-negative");
  }
  for (size_t i = 0; i < model.terms.size(); ++i)
    for (size_t j = i + 1; j < model.terms.size(); ++j)
      if (model.terms[i].p == model.terms[j].p &&
          model.terms[i].q == model.terms[j].q)
        throw ConfigError("energy model: duplicate term (p = " +
                          std::to_string(model.terms[i].p) + ", q = " +
                          std::to_string(model.terms[i].q) + ")");
}

template <class S>
S density_value(const EnergyModel<S>& model, S i1, S i2) {
  S d = 0;
  for (const auto& t : model.terms)
    d += t.coeff * pow_int(i1, t.p) * pow_int(i2, t.q);
  return d;
}

// Density evaluated from raw metric and curvature components; the
// independent-variable form used by the perturbation oracle.
template <class S>
S density_from_state(const EnergyModel<S>& model, const Mat2<S>& g,
                     const Mat2<S>& k) {
  const Mat2<S> gi = g.inverse();
  const S i1 = (gi * k).trace();
  const S i2 = ((gi * k * gi).cwiseProduct(k)).sum();
  return density_value(model, i1, i2);
}

template <class S>
ScalarField<S> density(const EnergyModel<S>& model,
                       const GeometryBundle<S>& b) {
  const CurvInvariants<S> inv = curv_invariants(b);
  ScalarField<S> d = ScalarField<S>::Zero(b.grid.nodes());
  for (const auto& t : model.terms)
    d += t.coeff * inv.trace.pow(t.p) * inv.square.pow(t.q);
  return d;
}

// Total energy: quadrature of density * area element, trapezoid weights
// with fourth-order end corrections at clamped boundaries.
template <class S>
S total_energy(const EnergyModel<S>& model, const GeometryBundle<S>& b) {
  const Grid<S>& g = b.grid;
  const ScalarField<S> d = density(model, b);
  S sum = 0;
  for (int i1 = 0; i1 < g.n1; ++i1) {
    const S w1 = g.quad_weight(1, i1);
    for (int i2 = 0; i2 < g.n2; ++i2) {
      const Index i = g.idx(i1, i2);
      sum += w1 * g.quad_weight(2, i2) * d(i) * b.sqrt_g(i);
    }
  }
  return sum * g.h1 * g.h2;
}

// Conjugate fields of the density: the curvature conjugate
//
//   H^ab = d(density)/d K_ab
//        = sum  coeff * (p I1^(p-1) I2^q g^ab + 2 q I1^p I2^(q-1) K^ab)
//
// and the metric conjugate (minus the variation of sqrt(g) * density
// with respect to the metric; equivalently the tangential stress of the
// unconstrained density)
//
//   T^ab = -(2/sqrt g) d(sqrt g * density)/d g_ab
//        = sum  coeff * (2 p I1^(p-1) I2^q K^ab
//                        + 4 q I1^p I2^(q-1) K^ac K_c^b
//                        - I1^p I2^q g^ab).
template <class S>
struct ConjugateFields {
  Sym2Field<S> curv_conjugate;    // H^ab
  Sym2Field<S> metric_conjugate;  // T^ab
};

template <class S>
ConjugateFields<S> conjugates(const EnergyModel<S>& model,
                              const GeometryBundle<S>& b) {
  validate(model);
  const Index n = b.grid.nodes();
  ConjugateFields<S> out;
  out.curv_conjugate.resize(n, 3);
  out.metric_conjugate.resize(n, 3);

  for (Index i = 0; i < n; ++i) {
    const Mat2<S> gi = sym2_at(b.metric_inv, i);
    const Mat2<S> km = sym2_at(b.curv, i);
    const Mat2<S> kup = gi * km * gi;
    const Mat2<S> kmix = km * gi;  // K_c^b at (c, b)
    const S i1 = (gi * km).trace();
    const S i2 = kup.cwiseProduct(km).sum();

    S dens = 0, da = 0, db = 0;
    for (const auto& t : model.terms) {
      dens += t.coeff * pow_int(i1, t.p) * pow_int(i2, t.q);
      if (t.p >= 1)
        da += t.coeff * S(t.p) * pow_int(i1, t.p - 1) * pow_int(i2, t.q);
      if (t.q >= 1)
        db += t.coeff * S(t.q) * pow_int(i1, t.p) * pow_int(i2, t.q - 1);
    }

    const Mat2<S> hup = da * gi + 2 * db * kup;
    const Mat2<S> tup = 2 * da * kup + 4 * db * (kup * kmix) - dens * gi;
    set_sym2(out.curv_conjugate, i, hup);
    set_sym2(out.metric_conjugate, i, tup);
  }
  return out;
}

template <class S>
struct NodeConjugates {
  Mat2<S> curv_conjugate;
  Mat2<S> metric_conjugate;
};

// Independent check of the closed-form conjugates: centered differences
// of the density with respect to one tensor component at a time, the
// other fields held fixed.  Off-diagonal perturbations move both
// symmetric slots, so those derivatives carry a factor 1/2.
template <class S>
NodeConjugates<S> conjugates_fd_oracle(const EnergyModel<S>& model,
                                       const GeometryBundle<S>& b, Index node,
                                       S delta) {
  const Mat2<S> g0 = sym2_at(b.metric, node);
  const Mat2<S> k0 = sym2_at(b.curv, node);
  const S sqrt_g0 = b.sqrt_g(node);

  NodeConjugates<S> out;
  for (int r = 0; r < 2; ++r) {
    for (int c = r; c < 2; ++c) {
      const S half = r == c ? S(1) : S(0.5);

      Mat2<S> kp = k0, km = k0;
      kp(r, c) += delta;
      kp(c, r) = kp(r, c);
      km(r, c) -= delta;
      km(c, r) = km(r, c);
      const S dh = (density_from_state(model, g0, kp) -
                    density_from_state(model, g0, km)) /
                   (2 * delta);
      out.curv_conjugate(r, c) = out.curv_conjugate(c, r) = half * dh;

      Mat2<S> gp = g0, gm = g0;
      gp(r, c) += delta;
      gp(c, r) = gp(r, c);
      gm(r, c) -= delta;
      gm(c, r) = gm(r, c);
      auto weighted = [&](const Mat2<S>& g) {
        return std::sqrt(g.determinant()) * density_from_state(model, g, k0);
      };
      const S dt = (weighted(gp) - weighted(gm)) / (2 * delta);
      out.metric_conjugate(r, c) = out.metric_conjugate(c, r) =
          -half * 2 * dt / sqrt_g0;
    }
  }
  return out;
}

// Lagrange multipliers of the auxiliary-variable formulation, all
// determined algebraically by the conjugate fields:
//
//   curvature multiplier   L^ab      = -H^ab
//   metric multiplier      l^ab      = T^ab / 2
//   orthogonality mult.    l_perp^a  = -(div L)^a
//   normalization mult.    l_n       = (1/2) L^ab K_ab
template <class S>
struct MultiplierField {
  Sym2Field<S> curv_multiplier;
  Sym2Field<S> metric_multiplier;
  SurfVecField<S> orth_multiplier;
  ScalarField<S> norm_multiplier;
};

template <class S>
MultiplierField<S> multipliers(const EnergyModel<S>& model,
                               const GeometryBundle<S>& b,
                               const ConjugateFields<S>& conj) {
  (void)model;
  MultiplierField<S> m;
  m.curv_multiplier = -conj.curv_conjugate;
  m.metric_multiplier = S(0.5) * conj.metric_conjugate;
  m.orth_multiplier = -cov_div_sym2(b, m.curv_multiplier);
  m.norm_multiplier =
      S(0.5) * contract_pair<S>(m.curv_multiplier, b.curv);
  return m;
}

template <class S>
MultiplierField<S> multipliers(const EnergyModel<S>& model,
                               const GeometryBundle<S>& b) {
  return multipliers(model, b, conjugates(model, b));
}

}  // namespace memstress
