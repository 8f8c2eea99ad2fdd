#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tec/certificate.hpp"
#include "tec/config.hpp"
#include "tec/coupler.hpp"
#include "tec/io.hpp"
#include "tec/regression.hpp"

namespace tec {

inline std::string resolve_output_dir(const OutputConfig& out) {
  if (const char* env = std::getenv("TECCELL_OUTPUT_DIR"); env && *env) return env;
  return out.directory;
}

struct RunArtifacts {
  Trajectory trajectory;
  std::string csv_path;
  int exit_code = 0;
};

inline RunArtifacts run_command(const std::string& config_path, std::ostream& log = std::cout) {
  const CellConfig cfg = parse_config(read_file(config_path));
  const Mesh mesh = build_mesh(cfg.geometry);
  const MaterialModel& model = *cfg.material.explicit_model;

  const std::string dir = resolve_output_dir(cfg.output);
  std::filesystem::create_directories(dir);

  RunArtifacts art;
  art.trajectory = run_transient(mesh, model, cfg.solver.picard, cfg.solver.t_final, cfg.solver.dt);
  art.csv_path = dir + "/trajectory.csv";
  std::vector<std::string> names;
  for (const auto& sp : model.species) names.push_back(sp.name);
  write_trajectory_csv(mesh, art.trajectory, names, art.csv_path);

  if (cfg.output.write_vtk && cfg.output.snapshot_every > 0) {
    for (std::size_t s = 0; s < art.trajectory.states.size();
         s += static_cast<std::size_t>(cfg.output.snapshot_every)) {
      const auto& st = art.trajectory.states[s];
      std::vector<std::pair<std::string, Vector>> fields;
      fields.emplace_back("theta", st.theta);
      for (std::size_t i = 0; i < st.concentrations.size(); ++i)
        fields.emplace_back("c_" + names[i], st.concentrations[i]);
      fields.emplace_back("phi", st.phi);
      write_vtk(mesh, fields, dir + "/fields_" + std::to_string(s) + ".vtk");
    }
  }

  if (!art.trajectory.completed) {
    log << "run failed at step " << art.trajectory.failed_step
        << " (residual " << art.trajectory.last_residual << "): " << art.trajectory.error
        << "\n";
    art.exit_code = 1;
  } else {
    log << "run completed: " << art.trajectory.states.size() - 1 << " steps, trajectory at "
        << art.csv_path << "\n";
  }
  return art;
}

inline json certificate_report_to_json(const CertificateReport& rep) {
  json j;
  j["certified"] = rep.certified;
  j["b0"] = rep.b0;
  j["b0_margin"] = rep.b0_margin;
  j["condition_b0"] = rep.condition_b0;
  j["a_sharp"] = rep.elliptic.a_sharp;
  j["b_sharp"] = rep.elliptic.b_sharp;
  j["b"] = rep.thermal.b;
  j["h_sharp"] = rep.thermal.h_sharp;
  if (!rep.failure_reason.empty()) j["failure_reason"] = rep.failure_reason;
  if (rep.certified) {
    j["radius_theta"] = rep.radius_theta;
    j["radius_residual"] = rep.p_of_r;
  }
  json species = json::array();
  for (const auto& sc : rep.species) {
    json js;
    js["name"] = sc.name;
    if (sc.b_i) js["b_i"] = *sc.b_i;
    js["slope"] = sc.slope;
    js["condition"] = sc.condition;
    js["margin"] = sc.margin;
    if (rep.certified) {
      js["radius"] = sc.radius;
      js["radius_residual"] = sc.residual;
    }
    js["a0"] = sc.constants.a0;
    js["a"] = sc.constants.a;
    species.push_back(js);
  }
  j["species"] = species;
  return j;
}

struct CertifyArtifacts {
  CertificateReport report;
  RegressionTable regression;
  bool ran_regression = false;
  std::string report_path;
  int exit_code = 0;
};

inline CertifyArtifacts certify_command(const std::string& config_path, bool symbolic,
                                        std::ostream& log = std::cout) {
  CellConfig cfg = parse_config(read_file(config_path));
  if (symbolic) cfg.certificate.symbolic = true;
  const Mesh mesh = build_mesh(cfg.geometry);
  const MaterialModel& model = *cfg.material.explicit_model;
  const CertificateNorms nm = certificate_norms_for(cfg, mesh, model);

  CertifyArtifacts art;
  art.report = check_smallness(model, cfg.certificate.constants, nm);

  const std::string dir = resolve_output_dir(cfg.output);
  std::filesystem::create_directories(dir);
  json jrep = certificate_report_to_json(art.report);

  log << "certificate: " << (art.report.certified ? "CERTIFIED" : "NOT CERTIFIED") << "\n";
  log << "  b0 = " << art.report.b0 << "  (margin " << art.report.b0_margin << ")\n";
  for (const auto& sc : art.report.species) {
    log << "  species " << sc.name << ": slope " << sc.slope << ", condition "
        << (sc.condition ? "ok" : "failed");
    if (art.report.certified) log << ", radius " << sc.radius;
    log << "\n";
  }
  if (art.report.certified) log << "  temperature radius R = " << art.report.radius_theta << "\n";
  if (!art.report.failure_reason.empty()) log << "  reason: " << art.report.failure_reason << "\n";

  if (cfg.certificate.symbolic && cfg.material.preset == "nacl-downs") {
    art.regression = nacl_regression(model, cfg.certificate.constants, nm);
    art.ran_regression = true;
    json jt = json::array();
    log << "  coefficient comparison (" << art.regression.rows.size() << " rows):\n";
    for (const auto& r : art.regression.rows) {
      log << "    " << r.name << ": computed " << r.computed << ", reference " << r.reference
          << ", rel.dev " << r.rel_deviation << "\n";
      jt.push_back(json{{"name", r.name},
                        {"reference", r.reference},
                        {"computed", r.computed},
                        {"rel_deviation", r.rel_deviation}});
    }
    jrep["regression"] = jt;
  }

  art.report_path = dir + "/certificate.json";
  std::ofstream f(art.report_path);
  f << jrep.dump(2) << "\n";
  art.exit_code = art.report.certified ? 0 : 2;
  return art;
}

struct SweepArtifacts {
  std::string csv_path;
  std::vector<double> values;
  std::vector<double> margins;
  std::vector<bool> certified;
  int exit_code = 0;
};

namespace cli_detail {
inline void set_json_path(json& root, const std::string& dotted, double value) {
  json* cur = &root;
  std::istringstream ss(dotted);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) throw ConfigError("empty parameter key");
  for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
    if (!cur->is_object()) throw ConfigError("parameter key '" + dotted + "' is not addressable");
    cur = &((*cur)[parts[k]]);
  }
  if (!cur->is_object()) throw ConfigError("parameter key '" + dotted + "' is not addressable");
  (*cur)[parts.back()] = value;
}
}  // namespace cli_detail

// Repeats the certificate evaluation across a numeric config key and writes a
// CSV of margins and outcomes. The key is validated by re-parsing the patched
// config, so unknown keys fail with the usual key-path error.
inline SweepArtifacts sweep_command(const std::string& config_path, const std::string& param,
                                    double from, double to, int steps,
                                    std::ostream& log = std::cout) {
  const json base = json::parse(read_file(config_path));
  SweepArtifacts art;

  CellConfig cfg0 = config_from_json(base);
  const std::string dir = resolve_output_dir(cfg0.output);
  std::filesystem::create_directories(dir);
  art.csv_path = dir + "/sweep.csv";
  std::ofstream f(art.csv_path);
  f << "# " << param << ",certified,b0,b0_margin,min_species_margin,radiation_group\n";

  for (int k = 0; k < steps; ++k) {
    const double v = steps == 1 ? from : from + (to - from) * k / (steps - 1.0);
    json patched = base;
    cli_detail::set_json_path(patched, param, v);
    const CellConfig cfg = config_from_json(patched);
    const Mesh mesh = build_mesh(cfg.geometry);
    const MaterialModel& model = *cfg.material.explicit_model;
    const CertificateNorms nm = certificate_norms_for(cfg, mesh, model);
    const CertificateReport rep = check_smallness(model, cfg.certificate.constants, nm);
    double min_species = 1.0;
    for (const auto& sc : rep.species) min_species = std::min(min_species, sc.margin);
    const double radiation_group =
        std::pow(model.radiative_min * model.k_min, -1.0 / cfg.certificate.constants.ell);
    f << format_double(v) << "," << (rep.certified ? 1 : 0) << "," << format_double(rep.b0)
      << "," << format_double(rep.b0_margin) << "," << format_double(min_species) << ","
      << format_double(radiation_group) << "\n";
    art.values.push_back(v);
    art.margins.push_back(rep.b0_margin);
    art.certified.push_back(rep.certified);
  }
  log << "sweep wrote " << steps << " rows to " << art.csv_path << "\n";
  return art;
}

}  // namespace tec
