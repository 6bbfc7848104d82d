#pragma once

#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "memstress/io.hpp"

namespace memstress::cli {

// Exit codes: 0 success, 1 configuration or usage error, 2 a tolerance
// was not met, 3 runtime failure (stagnation, lost immersion).
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitTolerance = 2;
inline constexpr int kExitRuntime = 3;

inline constexpr double kDefaultAuditTol = 1e-6;

namespace detail {

struct Options {
  std::string config_path;
  std::string out_dir = "out";
  std::string formats = "json,csv,obj";
  double tol = -1;  // audit only; negative = take from config or default
};

struct Formats {
  bool json = false, csv = false, obj = false;
};

inline Formats parse_formats(const std::string& s) {
  Formats f;
  size_t start = 0;
  while (start <= s.size()) {
    const size_t comma = s.find(',', start);
    const std::string tok =
        s.substr(start, comma == std::string::npos ? comma : comma - start);
    if (tok == "json")
      f.json = true;
    else if (tok == "csv")
      f.csv = true;
    else if (tok == "obj")
      f.obj = true;
    else if (!tok.empty())
      throw ConfigError("formats: unknown format \"" + tok +
                        "\" (expected a comma-separated subset of "
                        "json,csv,obj)");
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return f;
}

struct Inputs {
  Json config;
  SurfaceSpec<double> spec;
  Grid<double> grid;
  EmbeddingField<double> emb;
};

inline Inputs load_inputs(const Options& opt) {
  Inputs in;
  in.config = load_config(opt.config_path);
  const Json& sj =
      memstress::detail::require_key(in.config, "surface", "config");
  in.spec = parse_surface(sj);
  in.grid = parse_grid(sj, in.spec);
  in.emb = sample_surface(in.spec, in.grid);
  return in;
}

inline std::string out_path(const Options& opt, const std::string& name) {
  return (std::filesystem::path(opt.out_dir) / name).string();
}

inline void finish(const Options& opt, const std::string& command,
                   Json resolved, std::vector<std::string> outputs) {
  resolved["out"] = opt.out_dir;
  outputs.push_back("manifest.json");
  write_json(out_path(opt, "manifest.json"),
             manifest_json(command, resolved, outputs));
}

}  // namespace detail

inline int cmd_audit(const detail::Options& opt) {
  detail::Inputs in = detail::load_inputs(opt);
  const detail::Formats fmt = detail::parse_formats(opt.formats);
  const Json audit_cfg = in.config.contains("audit") ? in.config.at("audit")
                                                     : Json::object();
  const int margin =
      memstress::detail::int_or(audit_cfg, "interior_margin", 4, "audit config");
  double tol = opt.tol;
  if (tol < 0)
    tol = memstress::detail::number_or(audit_cfg, "tol", kDefaultAuditTol,
                                       "audit config");

  const GeometryBundle<double> bundle = geometry_bundle(in.emb);
  const IdentityReport<double> report =
      audit_identities(in.emb, bundle, margin);

  std::vector<std::string> outputs;
  if (fmt.json) {
    write_json(detail::out_path(opt, "identity_report.json"), to_json(report));
    outputs.push_back("identity_report.json");
  }
  if (fmt.csv) {
    std::string csv = "name,max_residual,l2_residual,h1,h2\n";
    for (const auto& e : report.entries)
      csv += e.name + "," + format_double(e.max_residual) + "," +
             format_double(e.l2_residual) + "," + format_double(report.h1) +
             "," + format_double(report.h2) + "\n";
    write_text(detail::out_path(opt, "identities.csv"), csv);
    outputs.push_back("identities.csv");
  }
  if (fmt.obj) {
    write_text(detail::out_path(opt, "surface.obj"),
               obj_mesh(in.grid, in.emb.positions));
    outputs.push_back("surface.obj");
  }

  bool pass = true;
  for (const auto& e : report.entries) {
    const bool ok = e.max_residual <= tol;
    pass = pass && ok;
    std::cout << (ok ? "  ok    " : "  FAIL  ") << e.name
              << "  max " << format_double(e.max_residual) << "  l2 "
              << format_double(e.l2_residual) << "\n";
  }
  std::cout << (pass ? "audit: all identities within " : "audit: exceeded ")
            << format_double(tol) << "\n";

  detail::finish(opt, "audit",
                 {{"surface", to_json(in.spec)},
                  {"grid", to_json(in.grid)},
                  {"audit", {{"tol", tol}, {"interior_margin", margin}}}},
                 outputs);
  return pass ? kExitOk : kExitTolerance;
}

inline int cmd_stress(const detail::Options& opt) {
  detail::Inputs in = detail::load_inputs(opt);
  const detail::Formats fmt = detail::parse_formats(opt.formats);
  const EnergyModel<double> model = parse_model(in.config);

  const GeometryBundle<double> bundle = geometry_bundle(in.emb);
  const StressField<double> f =
      stress_from_conjugates(bundle, conjugates(model, bundle));
  const ResidualField<double> resid = residuals(bundle, f);
  const int margin = 4;

  std::vector<std::string> outputs;
  if (fmt.csv) {
    write_text(detail::out_path(opt, "stress.csv"), csv_stress(in.grid, f));
    write_text(detail::out_path(opt, "residuals.csv"),
               csv_residuals(in.grid, resid));
    outputs.push_back("stress.csv");
    outputs.push_back("residuals.csv");
  }
  if (fmt.json) {
    write_json(detail::out_path(opt, "residual_norms.json"),
               residual_norms_json(in.grid, resid, margin));
    outputs.push_back("residual_norms.json");
  }
  if (fmt.obj) {
    write_text(detail::out_path(opt, "surface.obj"),
               obj_mesh(in.grid, in.emb.positions));
    outputs.push_back("surface.obj");
  }

  const FieldNorms<double> n = interior_norms(in.grid, resid.shape, margin);
  std::cout << "stress: shape residual max " << format_double(n.max)
            << "  l2 " << format_double(n.l2) << "\n";

  detail::finish(opt, "stress",
                 {{"surface", to_json(in.spec)},
                  {"grid", to_json(in.grid)},
                  {"model", to_json(model)}},
                 outputs);
  return kExitOk;
}

inline int cmd_energy(const detail::Options& opt) {
  detail::Inputs in = detail::load_inputs(opt);
  const detail::Formats fmt = detail::parse_formats(opt.formats);
  const EnergyModel<double> model = parse_model(in.config);

  const GeometryBundle<double> bundle = geometry_bundle(in.emb);
  const ScalarField<double> dens = density(model, bundle);
  const double total = total_energy(model, bundle);

  std::vector<std::string> outputs;
  if (fmt.json) {
    write_json(detail::out_path(opt, "energy.json"),
               Json{{"total_energy", total}, {"model", to_json(model)}});
    outputs.push_back("energy.json");
  }
  if (fmt.csv) {
    write_text(detail::out_path(opt, "density.csv"),
               csv_density(in.grid, dens, bundle.sqrt_g));
    outputs.push_back("density.csv");
  }
  if (fmt.obj) {
    write_text(detail::out_path(opt, "surface.obj"),
               obj_mesh(in.grid, in.emb.positions));
    outputs.push_back("surface.obj");
  }

  std::cout << "energy: total " << format_double(total) << "\n";

  detail::finish(opt, "energy",
                 {{"surface", to_json(in.spec)},
                  {"grid", to_json(in.grid)},
                  {"model", to_json(model)}},
                 outputs);
  return kExitOk;
}

inline int cmd_force(const detail::Options& opt) {
  detail::Inputs in = detail::load_inputs(opt);
  const detail::Formats fmt = detail::parse_formats(opt.formats);
  const EnergyModel<double> model = parse_model(in.config);
  const CurveSpec curve = parse_curve(in.config);

  const GeometryBundle<double> bundle = geometry_bundle(in.emb);
  const StressField<double> f =
      stress_from_conjugates(bundle, conjugates(model, bundle));
  const Vec3<double> force = boundary_force(bundle, f, curve);

  std::vector<std::string> outputs;
  if (fmt.json) {
    write_json(detail::out_path(opt, "force.json"),
               Json{{"force", {force(0), force(1), force(2)}},
                    {"curve", to_json(curve)},
                    {"model", to_json(model)}});
    outputs.push_back("force.json");
  }
  if (fmt.obj) {
    write_text(detail::out_path(opt, "surface.obj"),
               obj_mesh(in.grid, in.emb.positions));
    outputs.push_back("surface.obj");
  }

  std::cout << "force: [" << format_double(force(0)) << ", "
            << format_double(force(1)) << ", " << format_double(force(2))
            << "]\n";

  detail::finish(opt, "force",
                 {{"surface", to_json(in.spec)},
                  {"grid", to_json(in.grid)},
                  {"model", to_json(model)},
                  {"curve", to_json(curve)}},
                 outputs);
  return kExitOk;
}

inline int cmd_flow(const detail::Options& opt) {
  detail::Inputs in = detail::load_inputs(opt);
  const detail::Formats fmt = detail::parse_formats(opt.formats);
  const EnergyModel<double> model = parse_model(in.config);
  const FlowConfig<double> cfg = parse_flow(in.config, model);

  const FlowResult<double> result = run_flow(in.emb, cfg);

  std::vector<std::string> outputs;
  if (fmt.csv) {
    write_text(detail::out_path(opt, "trajectory.csv"),
               csv_trajectory(result.trajectory));
    write_text(detail::out_path(opt, "final_embedding.csv"),
               csv_embedding(in.grid, result.state.emb.positions));
    outputs.push_back("trajectory.csv");
    outputs.push_back("final_embedding.csv");
  }
  if (fmt.json) {
    write_json(detail::out_path(opt, "flow_summary.json"),
               Json{{"status", to_string(result.status)},
                    {"steps", result.state.step},
                    {"energy", result.state.energy},
                    {"max_shape_residual", result.state.max_shape_residual},
                    {"dt", result.state.dt},
                    {"descent_sign", result.descent_sign},
                    {"message", result.message}});
    outputs.push_back("flow_summary.json");
  }
  if (fmt.obj) {
    write_text(detail::out_path(opt, "final.obj"),
               obj_mesh(in.grid, result.state.emb.positions));
    outputs.push_back("final.obj");
  }

  std::cout << "flow: " << to_string(result.status) << " after "
            << result.state.step << " steps, energy "
            << format_double(result.state.energy) << ", max shape residual "
            << format_double(result.state.max_shape_residual) << "\n";
  if (!result.message.empty()) std::cout << "flow: " << result.message << "\n";

  detail::finish(opt, "flow",
                 {{"surface", to_json(in.spec)},
                  {"grid", to_json(in.grid)},
                  {"model", to_json(model)},
                  {"flow", to_json(cfg)}},
                 outputs);

  switch (result.status) {
    case FlowStatus::converged: return kExitOk;
    case FlowStatus::max_steps_reached: return kExitTolerance;
    case FlowStatus::stagnated:
    case FlowStatus::immersion_lost: return kExitRuntime;
  }
  return kExitRuntime;
}

inline int run(int argc, const char* const* argv) {
  CLI::App app{"surface stress and curvature-energy toolkit"};
  app.set_version_flag("--version", MEMSTRESS_VERSION);
  app.require_subcommand(1);

  detail::Options opt;
  auto add_common = [&](CLI::App* sub, bool with_tol = false) {
    sub->add_option("--config", opt.config_path, "JSON configuration file")
        ->required();
    sub->add_option("--out", opt.out_dir, "output directory (default: out)");
    sub->add_option("--formats", opt.formats,
                    "comma-separated subset of json,csv,obj");
    if (with_tol)
      sub->add_option("--tol", opt.tol,
                      "identity residual tolerance (default 1e-6)");
  };

  CLI::App* audit =
      app.add_subcommand("audit", "check structural surface identities");
  add_common(audit, true);
  CLI::App* stress =
      app.add_subcommand("stress", "stress field and equilibrium residuals");
  add_common(stress);
  CLI::App* energy = app.add_subcommand("energy", "density and total energy");
  add_common(energy);
  CLI::App* force =
      app.add_subcommand("force", "traction across a closed grid curve");
  add_common(force);
  CLI::App* flow =
      app.add_subcommand("flow", "descend toward shape equilibrium");
  add_common(flow);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (audit->parsed()) return cmd_audit(opt);
    if (stress->parsed()) return cmd_stress(opt);
    if (energy->parsed()) return cmd_energy(opt);
    if (force->parsed()) return cmd_force(opt);
    if (flow->parsed()) return cmd_flow(opt);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ImmersionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const StagnationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace memstress::cli
