#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "memstress/stress.hpp"

namespace memstress {

// L2-style gradient descent on the shape-equilibrium residual: nodes
// move along the normal, the step is accepted only if the total energy
// does not increase, and the step size halves (dt_shrink) on rejection.
template <class S>
struct FlowConfig {
  EnergyModel<S> model;
  S dt0 = S(1e-4);
  int max_steps = 1000;
  S tol = S(1e-4);        // stop when the interior shape residual is this small
  S dt_shrink = S(0.5);
  int smooth_every = 0;   // apply tangential smoothing every k accepted steps
  S smooth_weight = S(0.5);
  int record_every = 1;
  int clamp_rings = 1;    // node rings pinned at clamped edges
  int interior_margin = 4;
};

enum class FlowStatus { converged, max_steps_reached, stagnated, immersion_lost };

inline const char* to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::converged: return "converged";
    case FlowStatus::max_steps_reached: return "max_steps_reached";
    case FlowStatus::stagnated: return "stagnated";
    case FlowStatus::immersion_lost: return "immersion_lost";
  }
  return "?";
}

template <class S>
struct FlowState {
  EmbeddingField<S> emb;
  int step = 0;
  S energy = 0;
  S max_shape_residual = 0;
  S dt = 0;
};

template <class S>
struct TrajectoryRow {
  int step;
  S energy;
  S max_shape_residual;
  S dt;
};

template <class S>
struct FlowResult {
  FlowStatus status = FlowStatus::max_steps_reached;
  FlowState<S> state;
  std::vector<TrajectoryRow<S>> trajectory;
  S descent_sign = 1;
  std::string message;
};

using ClampMask = Eigen::Array<bool, Eigen::Dynamic, 1>;

// Nodes within `rings` rows of a clamped edge; these never move.
template <class S>
ClampMask edge_clamp_mask(const Grid<S>& g, int rings) {
  ClampMask mask = ClampMask::Constant(g.nodes(), false);
  if (rings <= 0) return mask;
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2) {
      const bool edge1 = g.bc1 == Bc::clamped &&
                         (i1 < rings || i1 >= g.n1 - rings);
      const bool edge2 = g.bc2 == Bc::clamped &&
                         (i2 < rings || i2 >= g.n2 - rings);
      if (edge1 || edge2) mask(g.idx(i1, i2)) = true;
    }
  return mask;
}

namespace detail {

template <class S>
struct FlowEval {
  GeometryBundle<S> bundle;
  ScalarField<S> shape;
  S energy = 0;
  S max_resid = 0;
};

template <class S>
FlowEval<S> eval_flow(const EmbeddingField<S>& emb, const EnergyModel<S>& model,
                      int margin) {
  FlowEval<S> ev;
  ev.bundle = geometry_bundle(emb);
  const ConjugateFields<S> conj = conjugates(model, ev.bundle);
  const StressField<S> f = stress_from_conjugates(ev.bundle, conj);
  ev.shape = residuals(ev.bundle, f).shape;
  ev.energy = total_energy(model, ev.bundle);
  ev.max_resid = interior_norms(emb.grid, ev.shape, margin).max;
  if (!std::isfinite(ev.energy) || !ev.shape.allFinite())
    throw ImmersionError("flow: non-finite energy or residual");
  return ev;
}

template <class S>
EmbeddingField<S> displaced(const EmbeddingField<S>& emb,
                            const FlowEval<S>& ev, const ClampMask& mask,
                            S step) {
  EmbeddingField<S> out = emb;
  for (Index i = 0; i < emb.grid.nodes(); ++i) {
    if (mask(i)) continue;
    out.positions.row(i) -= step * ev.shape(i) * ev.bundle.normal.row(i);
  }
  return out;
}

// Decide which sign of the residual is the descent direction by probing
// the energy with a tiny displacement either way.
template <class S>
S probe_descent_sign(const EmbeddingField<S>& emb, const FlowEval<S>& ev,
                     const FlowConfig<S>& cfg, const ClampMask& mask) {
  const S maxr = ev.shape.abs().maxCoeff();
  if (!(maxr > 0)) return S(1);
  const S delta =
      S(1e-3) * std::min(emb.grid.h1, emb.grid.h2) / maxr;
  auto energy_at = [&](S step) {
    return eval_flow(displaced(emb, ev, mask, step), cfg.model,
                     cfg.interior_margin)
        .energy;
  };
  try {
    const S e_plus_sign = energy_at(delta);
    const S e_minus_sign = energy_at(-delta);
    return e_plus_sign <= e_minus_sign ? S(1) : S(-1);
  } catch (const ImmersionError&) {
    return S(1);
  }
}

}  // namespace detail

// One accepted descent step.  Shrinks dt until the energy stops
// increasing; throws StagnationError when dt underflows, ImmersionError
// when every candidate step degenerates the immersion.
template <class S>
void flow_step(FlowState<S>& st, detail::FlowEval<S>& ev,
               const FlowConfig<S>& cfg, const ClampMask& mask, S sign) {
  const S dt_floor = S(1e-12) * cfg.dt0;
  bool last_reject_immersion = false;
  while (true) {
    EmbeddingField<S> trial =
        detail::displaced(st.emb, ev, mask, st.dt * sign);
    bool ok = true;
    detail::FlowEval<S> trial_ev;
    try {
      trial_ev = detail::eval_flow(trial, cfg.model, cfg.interior_margin);
      last_reject_immersion = false;
      if (!(trial_ev.energy <= ev.energy)) ok = false;
    } catch (const ImmersionError&) {
      ok = false;
      last_reject_immersion = true;
    }
    if (ok) {
      st.emb = std::move(trial);
      ev = std::move(trial_ev);
      return;
    }
    st.dt *= cfg.dt_shrink;
    if (!(st.dt > dt_floor)) {
      const std::string at = " at step " + std::to_string(st.step + 1) +
                             " (dt fell below 1e-12 * dt0)";
      if (last_reject_immersion)
        throw ImmersionError("flow: immersion lost" + at);
      throw StagnationError("flow: no energy-decreasing step found" + at);
    }
  }
}

// Pull nodes toward the average of their four grid neighbours, projected
// onto the tangent plane so the shape is not disturbed.
template <class S>
EmbeddingField<S> tangential_smooth(const EmbeddingField<S>& emb,
                                    const GeometryBundle<S>& b,
                                    const ClampMask& mask, S weight) {
  const Grid<S>& g = emb.grid;
  EmbeddingField<S> out = emb;
  for (int i1 = 0; i1 < g.n1; ++i1) {
    for (int i2 = 0; i2 < g.n2; ++i2) {
      const Index i = g.idx(i1, i2);
      if (mask(i)) continue;
      const bool inner1 =
          g.bc1 == Bc::periodic || (i1 > 0 && i1 < g.n1 - 1);
      const bool inner2 =
          g.bc2 == Bc::periodic || (i2 > 0 && i2 < g.n2 - 1);
      if (!inner1 || !inner2) continue;
      const int p1 = (i1 + 1) % g.n1, m1 = (i1 + g.n1 - 1) % g.n1;
      const int p2 = (i2 + 1) % g.n2, m2 = (i2 + g.n2 - 1) % g.n2;
      const Vec3<S> avg =
          S(0.25) * (emb.positions.row(g.idx(p1, i2)) +
                     emb.positions.row(g.idx(m1, i2)) +
                     emb.positions.row(g.idx(i1, p2)) +
                     emb.positions.row(g.idx(i1, m2)))
                        .transpose();
      const Vec3<S> d = weight * (avg - emb.positions.row(i).transpose());
      const Vec3<S> n = b.normal.row(i).transpose();
      out.positions.row(i) += (d - d.dot(n) * n).transpose();
    }
  }
  return out;
}

template <class S>
void validate(const FlowConfig<S>& cfg) {
  validate(cfg.model);
  if (!(cfg.dt0 > 0) || !std::isfinite(cfg.dt0))
    throw ConfigError("flow: dt0 must be positive and finite");
  if (!(cfg.dt_shrink > 0 && cfg.dt_shrink < 1))
    throw ConfigError("flow: dt_shrink must lie in (0, 1)");
  if (cfg.max_steps < 0) throw ConfigError("flow: max_steps must be >= 0");
  if (!(cfg.tol >= 0)) throw ConfigError("flow: tol must be >= 0");
  if (cfg.record_every < 1)
    throw ConfigError("flow: record_every must be >= 1");
  if (cfg.smooth_every < 0)
    throw ConfigError("flow: smooth_every must be >= 0");
  if (!(cfg.smooth_weight >= 0 && cfg.smooth_weight <= 1))
    throw ConfigError("flow: smooth_weight must lie in [0, 1]");
  if (cfg.clamp_rings < 0)
    throw ConfigError("flow: clamp_rings must be >= 0");
}

// Drive the embedding toward shape equilibrium.  Throws ImmersionError
// if the initial state is already degenerate; afterwards failures are
// reported through the result status with the last valid state intact.
template <class S>
FlowResult<S> run_flow(const EmbeddingField<S>& initial,
                       const FlowConfig<S>& cfg) {
  validate(cfg);
  const ClampMask mask = edge_clamp_mask(initial.grid, cfg.clamp_rings);

  FlowResult<S> out;
  FlowState<S>& st = out.state;
  st.emb = initial;
  st.dt = cfg.dt0;

  detail::FlowEval<S> ev =
      detail::eval_flow(initial, cfg.model, cfg.interior_margin);
  const S sign = detail::probe_descent_sign(initial, ev, cfg, mask);
  out.descent_sign = sign;

  auto sync = [&]() {
    st.energy = ev.energy;
    st.max_shape_residual = ev.max_resid;
  };
  auto record = [&]() {
    out.trajectory.push_back({st.step, st.energy, st.max_shape_residual,
                              st.dt});
  };
  sync();
  record();

  if (ev.max_resid <= cfg.tol) {
    out.status = FlowStatus::converged;
    return out;
  }

  for (int step = 1; step <= cfg.max_steps; ++step) {
    try {
      flow_step(st, ev, cfg, mask, sign);
    } catch (const StagnationError& e) {
      out.status = FlowStatus::stagnated;
      out.message = e.what();
      sync();
      record();
      return out;
    } catch (const ImmersionError& e) {
      out.status = FlowStatus::immersion_lost;
      out.message = e.what();
      sync();
      record();
      return out;
    }
    st.step = step;

    if (cfg.smooth_every > 0 && step % cfg.smooth_every == 0) {
      EmbeddingField<S> smoothed =
          tangential_smooth(st.emb, ev.bundle, mask, cfg.smooth_weight);
      try {
        detail::FlowEval<S> sev =
            detail::eval_flow(smoothed, cfg.model, cfg.interior_margin);
        st.emb = std::move(smoothed);
        ev = std::move(sev);
      } catch (const ImmersionError&) {
        // keep the unsmoothed state
      }
    }

    sync();
    if (ev.max_resid <= cfg.tol) {
      out.status = FlowStatus::converged;
      record();
      return out;
    }
    if (step % cfg.record_every == 0 || step == cfg.max_steps) record();
  }
  out.status = FlowStatus::max_steps_reached;
  return out;
}

}  // namespace memstress
