#pragma once

#include <array>
#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "memstress/flow.hpp"
#include "memstress/identities.hpp"
#include "memstress/stress.hpp"
#include "memstress/version.hpp"

namespace memstress {

using Json = nlohmann::json;

// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
  std::array<char, 40> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

// --- config loading -------------------------------------------------------

inline Json load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    size_t line = 1, col = 1;
    const size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
    for (size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("config: JSON parse error in " + path + " at line " +
                      std::to_string(line) + ", column " +
                      std::to_string(col));
  }
}

namespace detail {

inline const Json& require_key(const Json& j, const std::string& key,
                               const std::string& context) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(context + ": missing key \"" + key + "\"");
  return j.at(key);
}

inline double require_number(const Json& j, const std::string& key,
                             const std::string& context) {
  const Json& v = require_key(j, key, context);
  if (!v.is_number())
    throw ConfigError(context + ": key \"" + key + "\" must be a number");
  return v.get<double>();
}

inline int require_int(const Json& j, const std::string& key,
                       const std::string& context) {
  const Json& v = require_key(j, key, context);
  if (!v.is_number_integer())
    throw ConfigError(context + ": key \"" + key + "\" must be an integer");
  return v.get<int>();
}

inline double number_or(const Json& j, const std::string& key, double dflt,
                        const std::string& context) {
  if (!j.is_object() || !j.contains(key)) return dflt;
  if (!j.at(key).is_number())
    throw ConfigError(context + ": key \"" + key + "\" must be a number");
  return j.at(key).get<double>();
}

inline int int_or(const Json& j, const std::string& key, int dflt,
                  const std::string& context) {
  if (!j.is_object() || !j.contains(key)) return dflt;
  if (!j.at(key).is_number_integer())
    throw ConfigError(context + ": key \"" + key + "\" must be an integer");
  return j.at(key).get<int>();
}

}  // namespace detail

inline Bc parse_bc(const std::string& s) {
  if (s == "periodic") return Bc::periodic;
  if (s == "clamped") return Bc::clamped;
  throw ConfigError("grid config: bc must be \"periodic\" or \"clamped\", got \"" +
                    s + "\"");
}

inline SurfaceSpec<double> parse_surface(const Json& j) {
  const std::string ctx = "surface config";
  const Json& kind_j = detail::require_key(j, "kind", ctx);
  if (!kind_j.is_string())
    throw ConfigError(ctx + ": key \"kind\" must be a string");
  const std::string kind = kind_j.get<std::string>();
  const Json params = j.contains("params") ? j.at("params") : Json::object();
  const std::string pctx = "surface params";

  SurfaceSpec<double> spec;
  if (kind == "sphere_band") {
    spec = SurfaceSpec<double>::sphere_band(
        detail::require_number(params, "R", pctx),
        detail::require_number(params, "theta0", pctx));
  } else if (kind == "cylinder") {
    spec = SurfaceSpec<double>::cylinder(
        detail::require_number(params, "rho", pctx),
        detail::require_number(params, "L", pctx));
  } else if (kind == "catenoid") {
    spec = SurfaceSpec<double>::catenoid(
        detail::require_number(params, "c", pctx),
        detail::require_number(params, "L", pctx));
  } else if (kind == "torus") {
    spec = SurfaceSpec<double>::torus(
        detail::require_number(params, "R", pctx),
        detail::require_number(params, "r", pctx));
  } else if (kind == "ellipsoid_band") {
    spec = SurfaceSpec<double>::ellipsoid_band(
        detail::require_number(params, "a", pctx),
        detail::require_number(params, "b", pctx),
        detail::require_number(params, "c", pctx),
        detail::require_number(params, "theta0", pctx));
  } else if (kind == "graph") {
    spec = SurfaceSpec<double>::graph(
        detail::require_number(params, "amplitude", pctx),
        detail::require_number(params, "kx", pctx),
        detail::require_number(params, "ky", pctx));
  } else {
    throw ConfigError(ctx + ": unknown kind \"" + kind +
                      "\" (expected sphere_band, cylinder, catenoid, torus, "
                      "ellipsoid_band or graph)");
  }
  validate(spec);
  return spec;
}

inline Grid<double> parse_grid(const Json& j, const SurfaceSpec<double>& spec) {
  const std::string ctx = "grid config";
  const Json& gj = detail::require_key(j, "grid", "surface config");
  const Json& nj = detail::require_key(gj, "n", ctx);
  if (!nj.is_array() || nj.size() != 2)
    throw ConfigError(ctx + ": key \"n\" must be an array [n1, n2]");
  const int n1 = nj.at(0).get<int>(), n2 = nj.at(1).get<int>();

  auto [bc1, bc2] = default_bc(spec);
  if (gj.contains("bc")) {
    const Json& bj = gj.at("bc");
    if (!bj.is_array() || bj.size() != 2)
      throw ConfigError(ctx + ": key \"bc\" must be an array of two strings");
    bc1 = parse_bc(bj.at(0).get<std::string>());
    bc2 = parse_bc(bj.at(1).get<std::string>());
  }

  Domain<double> d = default_domain(spec);
  if (gj.contains("domain")) {
    const Json& dj = gj.at("domain");
    if (!dj.is_array() || dj.size() != 2 || !dj.at(0).is_array() ||
        !dj.at(1).is_array() || dj.at(0).size() != 2 || dj.at(1).size() != 2)
      throw ConfigError(ctx +
                        ": key \"domain\" must be [[u1min, u1max], "
                        "[u2min, u2max]]");
    d = {dj.at(0).at(0).get<double>(), dj.at(0).at(1).get<double>(),
         dj.at(1).at(0).get<double>(), dj.at(1).at(1).get<double>()};
  }
  return make_grid(d.u1_min, d.u1_max, d.u2_min, d.u2_max, n1, n2, bc1, bc2);
}

inline EnergyModel<double> parse_model(const Json& root) {
  const std::string ctx = "model config";
  const Json& j = detail::require_key(root, "model", "config");
  EnergyModel<double> model;
  if (j.contains("preset")) {
    const std::string preset = j.at("preset").get<std::string>();
    if (preset == "soap_film") {
      model = EnergyModel<double>::soap_film(
          detail::require_number(j, "mu", ctx));
    } else if (preset == "willmore") {
      model = EnergyModel<double>::willmore(
          detail::require_number(j, "alpha", ctx));
    } else if (preset == "helfrich") {
      model = EnergyModel<double>::helfrich(
          detail::require_number(j, "alpha", ctx),
          detail::require_number(j, "mu", ctx));
    } else {
      throw ConfigError(ctx + ": unknown preset \"" + preset +
                        "\" (expected soap_film, willmore or helfrich)");
    }
  } else if (j.contains("terms")) {
    const Json& terms = j.at("terms");
    if (!terms.is_array() || terms.empty())
      throw ConfigError(ctx + ": key \"terms\" must be a non-empty array");
    for (const Json& t : terms)
      model.terms.push_back({detail::require_number(t, "c", ctx),
                             detail::require_int(t, "p", ctx),
                             detail::require_int(t, "q", ctx)});
  } else {
    throw ConfigError(ctx + ": need either \"preset\" or \"terms\"");
  }
  validate(model);
  return model;
}

inline CurveSpec parse_curve(const Json& root) {
  const std::string ctx = "curve config";
  const Json& j = detail::require_key(root, "curve", "config");
  CurveSpec curve;
  curve.along = detail::require_int(j, "along", ctx);
  curve.fixed_index = detail::require_int(j, "index", ctx);
  const std::string side =
      detail::require_key(j, "side", ctx).get<std::string>();
  if (side == "plus")
    curve.side = CurveSide::plus;
  else if (side == "minus")
    curve.side = CurveSide::minus;
  else
    throw ConfigError(ctx + ": side must be \"plus\" or \"minus\"");
  return curve;
}

inline FlowConfig<double> parse_flow(const Json& root,
                                     const EnergyModel<double>& model) {
  const std::string ctx = "flow config";
  const Json j = root.contains("flow") ? root.at("flow") : Json::object();
  FlowConfig<double> cfg;
  cfg.model = model;
  cfg.dt0 = detail::number_or(j, "dt0", cfg.dt0, ctx);
  cfg.max_steps = detail::int_or(j, "max_steps", cfg.max_steps, ctx);
  cfg.tol = detail::number_or(j, "tol", cfg.tol, ctx);
  cfg.dt_shrink = detail::number_or(j, "dt_shrink", cfg.dt_shrink, ctx);
  cfg.smooth_every = detail::int_or(j, "smooth_every", cfg.smooth_every, ctx);
  cfg.smooth_weight =
      detail::number_or(j, "smooth_weight", cfg.smooth_weight, ctx);
  cfg.record_every = detail::int_or(j, "record_every", cfg.record_every, ctx);
  cfg.clamp_rings = detail::int_or(j, "clamp_rings", cfg.clamp_rings, ctx);
  cfg.interior_margin =
      detail::int_or(j, "interior_margin", cfg.interior_margin, ctx);
  validate(cfg);
  return cfg;
}

// --- echo of the resolved configuration -----------------------------------

inline Json to_json(const SurfaceSpec<double>& s) {
  Json params;
  switch (s.kind) {
    case SurfaceKind::sphere_band:
      params = {{"R", s.radius}, {"theta0", s.theta0}};
      break;
    case SurfaceKind::cylinder:
      params = {{"rho", s.radius}, {"L", s.length}};
      break;
    case SurfaceKind::catenoid:
      params = {{"c", s.neck}, {"L", s.length}};
      break;
    case SurfaceKind::torus:
      params = {{"R", s.major_radius}, {"r", s.minor_radius}};
      break;
    case SurfaceKind::ellipsoid_band:
      params = {{"a", s.ax}, {"b", s.ay}, {"c", s.az}, {"theta0", s.theta0}};
      break;
    case SurfaceKind::graph:
      params = {{"amplitude", s.amplitude}, {"kx", s.kx}, {"ky", s.ky}};
      break;
  }
  return {{"kind", to_string(s.kind)}, {"params", params}};
}

inline Json to_json(const Grid<double>& g) {
  return {{"n", {g.n1, g.n2}},
          {"bc", {to_string(g.bc1), to_string(g.bc2)}},
          {"domain", {{g.u1_min, g.u1_max}, {g.u2_min, g.u2_max}}},
          {"h", {g.h1, g.h2}}};
}

inline Json to_json(const EnergyModel<double>& m) {
  Json terms = Json::array();
  for (const auto& t : m.terms)
    terms.push_back({{"c", t.coeff}, {"p", t.p}, {"q", t.q}});
  return {{"terms", terms}};
}

inline Json to_json(const FlowConfig<double>& c) {
  return {{"dt0", c.dt0},
          {"max_steps", c.max_steps},
          {"tol", c.tol},
          {"dt_shrink", c.dt_shrink},
          {"smooth_every", c.smooth_every},
          {"smooth_weight", c.smooth_weight},
          {"record_every", c.record_every},
          {"clamp_rings", c.clamp_rings},
          {"interior_margin", c.interior_margin}};
}

inline Json to_json(const CurveSpec& c) {
  return {{"along", c.along},
          {"index", c.fixed_index},
          {"side", c.side == CurveSide::plus ? "plus" : "minus"}};
}

inline Json to_json(const IdentityReport<double>& rep) {
  Json identities = Json::array();
  for (const auto& e : rep.entries)
    identities.push_back({{"name", e.name},
                          {"max_residual", e.max_residual},
                          {"l2_residual", e.l2_residual},
                          {"h1", rep.h1},
                          {"h2", rep.h2}});
  return {{"h1", rep.h1},
          {"h2", rep.h2},
          {"interior_margin", rep.interior_margin},
          {"identities", identities}};
}

// --- report and field writers ---------------------------------------------

inline void write_text(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("io: cannot open " + path + " for writing");
  out << content;
  if (!out) throw ConfigError("io: failed writing " + path);
}

inline void write_json(const std::string& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

inline std::string csv_stress(const Grid<double>& g,
                              const StressField<double>& f) {
  std::string s =
      "i1,i2,f11,f12,f22,fn1,fn2,w1x,w1y,w1z,w2x,w2y,w2z\n";
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2) {
      const Index i = g.idx(i1, i2);
      s += std::to_string(i1) + "," + std::to_string(i2);
      for (int c = 0; c < 3; ++c) s += "," + format_double(f.tangential(i, c));
      for (int c = 0; c < 2; ++c) s += "," + format_double(f.normal(i, c));
      for (int c = 0; c < 3; ++c) s += "," + format_double(f.world1(i, c));
      for (int c = 0; c < 3; ++c) s += "," + format_double(f.world2(i, c));
      s += "\n";
    }
  return s;
}

inline std::string csv_residuals(const Grid<double>& g,
                                 const ResidualField<double>& r) {
  std::string s = "i1,i2,shape,t1,t2,divx,divy,divz\n";
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2) {
      const Index i = g.idx(i1, i2);
      s += std::to_string(i1) + "," + std::to_string(i2);
      s += "," + format_double(r.shape(i));
      for (int c = 0; c < 2; ++c) s += "," + format_double(r.tangential(i, c));
      for (int c = 0; c < 3; ++c) s += "," + format_double(r.direct_div(i, c));
      s += "\n";
    }
  return s;
}

inline std::string csv_density(const Grid<double>& g,
                               const ScalarField<double>& dens,
                               const ScalarField<double>& sqrt_g) {
  std::string s = "i1,i2,density,sqrt_g\n";
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2) {
      const Index i = g.idx(i1, i2);
      s += std::to_string(i1) + "," + std::to_string(i2) + "," +
           format_double(dens(i)) + "," + format_double(sqrt_g(i)) + "\n";
    }
  return s;
}

inline std::string csv_embedding(const Grid<double>& g,
                                 const Vec3Field<double>& x) {
  std::string s = "i1,i2,x,y,z\n";
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2) {
      const Index i = g.idx(i1, i2);
      s += std::to_string(i1) + "," + std::to_string(i2);
      for (int c = 0; c < 3; ++c) s += "," + format_double(x(i, c));
      s += "\n";
    }
  return s;
}

inline std::string csv_trajectory(
    const std::vector<TrajectoryRow<double>>& rows) {
  std::string s = "step,energy,max_shape_residual,dt\n";
  for (const auto& r : rows)
    s += std::to_string(r.step) + "," + format_double(r.energy) + "," +
         format_double(r.max_shape_residual) + "," + format_double(r.dt) +
         "\n";
  return s;
}

// Wavefront OBJ of the embedded grid: one vertex per node, two triangles
// per grid cell, seam cells included on periodic directions.
inline std::string obj_mesh(const Grid<double>& g, const Vec3Field<double>& x) {
  std::string s;
  for (Index i = 0; i < g.nodes(); ++i)
    s += "v " + format_double(x(i, 0)) + " " + format_double(x(i, 1)) + " " +
         format_double(x(i, 2)) + "\n";
  const int c1 = g.bc1 == Bc::periodic ? g.n1 : g.n1 - 1;
  const int c2 = g.bc2 == Bc::periodic ? g.n2 : g.n2 - 1;
  auto vid = [&](int i1, int i2) {
    return std::to_string(g.idx(i1 % g.n1, i2 % g.n2) + 1);
  };
  for (int i1 = 0; i1 < c1; ++i1)
    for (int i2 = 0; i2 < c2; ++i2) {
      const std::string v00 = vid(i1, i2), v10 = vid(i1 + 1, i2),
                        v11 = vid(i1 + 1, i2 + 1), v01 = vid(i1, i2 + 1);
      s += "f " + v00 + " " + v10 + " " + v11 + "\n";
      s += "f " + v00 + " " + v11 + " " + v01 + "\n";
    }
  return s;
}

inline Json residual_norms_json(const Grid<double>& g,
                                const ResidualField<double>& r, int margin) {
  auto norms = [&](const auto& field) {
    const FieldNorms<double> n = interior_norms(g, field, margin);
    return Json{{"max", n.max}, {"l2", n.l2}};
  };
  return {{"interior_margin", margin},
          {"h1", g.h1},
          {"h2", g.h2},
          {"shape", norms(r.shape)},
          {"tangential", norms(r.tangential)},
          {"direct_div", norms(r.direct_div)}};
}

inline std::string iso_timestamp_utc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Every run drops a manifest next to its outputs: the resolved
// configuration, the artifact version and the produced files.  The
// timestamp is the only field that varies between identical runs.
inline Json manifest_json(const std::string& command, const Json& resolved,
                          const std::vector<std::string>& outputs) {
  return {{"artifact", "memstress"},
          {"version", MEMSTRESS_VERSION},
          {"command", command},
          {"config", resolved},
          {"outputs", outputs},
          {"timestamp", iso_timestamp_utc()}};
}

}  // namespace memstress
