#pragma once

#include <json.hpp>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tec/certificate.hpp"
#include "tec/core.hpp"
#include "tec/coupler.hpp"
#include "tec/materials.hpp"
#include "tec/mesh.hpp"

namespace tec {

using nlohmann::json;

namespace cfg_detail {

inline void check_keys(const json& j, const std::string& path,
                       const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(path + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + path + "." + it.key() + "'");
}

inline const json& require(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing key '" + path + "." + key + "'");
  return j.at(key);
}

inline double require_number(const json& j, const std::string& path, const std::string& key) {
  const json& v = require(j, path, key);
  if (!v.is_number()) throw ConfigError("'" + path + "." + key + "' must be a number");
  return v.get<double>();
}

inline double number_or(const json& j, const std::string& path, const std::string& key,
                        double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError("'" + path + "." + key + "' must be a number");
  return j.at(key).get<double>();
}

inline int int_or(const json& j, const std::string& path, const std::string& key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer())
    throw ConfigError("'" + path + "." + key + "' must be an integer");
  return j.at(key).get<int>();
}

}  // namespace cfg_detail

// ---------------------------------------------------------------------------
// Coefficient laws <-> JSON

inline Law law_from_json(const json& j, const std::string& path) {
  using namespace cfg_detail;
  if (j.is_number()) return ConstantLaw{j.get<double>()};
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("'" + path + "' must be a number or an object with a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    check_keys(j, path, {"kind", "value"});
    return ConstantLaw{require_number(j, path, "value")};
  }
  if (kind == "piecewise_x") {
    check_keys(j, path, {"kind", "breaks", "values"});
    PiecewiseXLaw l;
    l.breaks = require(j, path, "breaks").get<std::vector<double>>();
    l.values = require(j, path, "values").get<std::vector<double>>();
    if (l.values.size() != l.breaks.size() + 1)
      throw ConfigError("'" + path + "': values must have breaks+1 entries");
    return l;
  }
  if (kind == "poly_theta") {
    check_keys(j, path, {"kind", "coeffs"});
    return PolyThetaLaw{require(j, path, "coeffs").get<std::vector<double>>()};
  }
  if (kind == "table_theta") {
    check_keys(j, path, {"kind", "theta", "values"});
    TableThetaLaw l;
    l.theta = require(j, path, "theta").get<std::vector<double>>();
    l.values = require(j, path, "values").get<std::vector<double>>();
    if (l.theta.size() != l.values.size() || l.theta.empty())
      throw ConfigError("'" + path + "': theta and values must match and be nonempty");
    return l;
  }
  if (kind == "saturating_c") {
    check_keys(j, path, {"kind", "value", "c_ref"});
    return SaturatingCLaw{require_number(j, path, "value"), require_number(j, path, "c_ref")};
  }
  if (kind == "inverse_r_theta2") {
    check_keys(j, path, {"kind", "bound", "gas_constant"});
    return InverseRThetaSqLaw{require_number(j, path, "bound"),
                              number_or(j, path, "gas_constant", 8.314)};
  }
  if (kind == "decay_theta") {
    check_keys(j, path, {"kind", "value", "theta_knee"});
    return DecayThetaLaw{require_number(j, path, "value"),
                         require_number(j, path, "theta_knee")};
  }
  throw ConfigError("'" + path + ".kind': unknown law kind '" + kind + "'");
}

inline json law_to_json(const Law& law) {
  struct V {
    json operator()(const ConstantLaw& l) const {
      return json{{"kind", "constant"}, {"value", l.value}};
    }
    json operator()(const PiecewiseXLaw& l) const {
      return json{{"kind", "piecewise_x"}, {"breaks", l.breaks}, {"values", l.values}};
    }
    json operator()(const PolyThetaLaw& l) const {
      return json{{"kind", "poly_theta"}, {"coeffs", l.coeffs}};
    }
    json operator()(const TableThetaLaw& l) const {
      return json{{"kind", "table_theta"}, {"theta", l.theta}, {"values", l.values}};
    }
    json operator()(const SaturatingCLaw& l) const {
      return json{{"kind", "saturating_c"}, {"value", l.value0}, {"c_ref", l.c_ref}};
    }
    json operator()(const InverseRThetaSqLaw& l) const {
      return json{{"kind", "inverse_r_theta2"}, {"bound", l.bound},
                  {"gas_constant", l.gas_constant}};
    }
    json operator()(const DecayThetaLaw& l) const {
      return json{{"kind", "decay_theta"}, {"value", l.value0}, {"theta_knee", l.theta_knee}};
    }
  };
  return std::visit(V{}, law);
}

// ---------------------------------------------------------------------------
// Config blocks

struct GeometryConfig {
  int dimension = 1;
  double length = 1.0;   // 1-D
  int cells = 16;        // 1-D
  double width = 1.0;    // 2-D
  double height = 1.0;
  int nx = 8, ny = 8;
  BoundaryTag left = BoundaryTag::anode;
  BoundaryTag right = BoundaryTag::cathode;
  BoundaryTag bottom = BoundaryTag::wall;
  BoundaryTag top = BoundaryTag::outer;
};

struct MaterialConfig {
  std::string preset;          // empty -> explicit model below
  json overrides = json::object();
  std::optional<MaterialModel> explicit_model;
};

struct SolverConfig {
  double dt = 1.0;
  double t_final = 1.0;
  PicardSettings picard;
};

struct CertificateConfig {
  bool symbolic = false;
  EmbeddingConstants constants;
  json norm_overrides = json::object();
};

struct OutputConfig {
  std::string directory = "out";
  int snapshot_every = 0;  // steps between VTK snapshots; 0 disables
  bool write_vtk = false;
};

struct CellConfig {
  int version = 1;
  GeometryConfig geometry;
  MaterialConfig material;
  SolverConfig solver;
  CertificateConfig certificate;
  OutputConfig output;
};

// ---------------------------------------------------------------------------
// Parsing

inline GeometryConfig geometry_from_json(const json& j) {
  using namespace cfg_detail;
  GeometryConfig g;
  check_keys(j, "geometry",
             {"dimension", "length", "cells", "width", "height", "nx", "ny", "tags"});
  g.dimension = int_or(j, "geometry", "dimension", 1);
  if (g.dimension != 1 && g.dimension != 2)
    throw ConfigError("'geometry.dimension' must be 1 or 2");
  json tags = j.contains("tags") ? j.at("tags") : json::object();
  check_keys(tags, "geometry.tags", {"left", "right", "bottom", "top"});
  auto tag_or = [&](const std::string& key, BoundaryTag fb) {
    return tags.contains(key) ? boundary_tag_from_string(tags.at(key).get<std::string>()) : fb;
  };
  g.left = tag_or("left", BoundaryTag::anode);
  g.right = tag_or("right", BoundaryTag::cathode);
  g.bottom = tag_or("bottom", BoundaryTag::wall);
  g.top = tag_or("top", BoundaryTag::outer);
  if (g.dimension == 1) {
    g.length = require_number(j, "geometry", "length");
    g.cells = int_or(j, "geometry", "cells", 16);
  } else {
    g.width = require_number(j, "geometry", "width");
    g.height = require_number(j, "geometry", "height");
    g.nx = int_or(j, "geometry", "nx", 8);
    g.ny = int_or(j, "geometry", "ny", 8);
  }
  return g;
}

inline json geometry_to_json(const GeometryConfig& g) {
  json tags{{"left", to_string(g.left)}, {"right", to_string(g.right)}};
  if (g.dimension == 2) {
    tags["bottom"] = to_string(g.bottom);
    tags["top"] = to_string(g.top);
    return json{{"dimension", 2}, {"width", g.width}, {"height", g.height},
                {"nx", g.nx},     {"ny", g.ny},       {"tags", tags}};
  }
  return json{{"dimension", 1}, {"length", g.length}, {"cells", g.cells}, {"tags", tags}};
}

inline Mesh build_mesh(const GeometryConfig& g) {
  if (g.dimension == 1) return build_interval_mesh(g.length, g.cells, g.left, g.right);
  return build_rectangle_mesh(g.width, g.height, g.nx, g.ny,
                              SideTags{g.left, g.right, g.bottom, g.top});
}

inline ButlerVolmerElectrode bv_from_json(const json& j, const std::string& path) {
  using namespace cfg_detail;
  check_keys(j, path, {"enabled", "exchange_current", "beta", "electrons", "eq_potential"});
  ButlerVolmerElectrode bv;
  bv.enabled = j.contains("enabled") ? j.at("enabled").get<bool>() : true;
  bv.exchange_current = number_or(j, path, "exchange_current", 0.0);
  bv.beta = number_or(j, path, "beta", 0.5);
  bv.electrons = int_or(j, path, "electrons", 1);
  bv.eq_potential = number_or(j, path, "eq_potential", 0.0);
  return bv;
}

inline json bv_to_json(const ButlerVolmerElectrode& bv) {
  return json{{"enabled", bv.enabled},
              {"exchange_current", bv.exchange_current},
              {"beta", bv.beta},
              {"electrons", bv.electrons},
              {"eq_potential", bv.eq_potential}};
}

inline MaterialModel explicit_model_from_json(const json& j) {
  using namespace cfg_detail;
  const std::string path = "material";
  check_keys(j, path,
             {"constants", "theta_range", "conductivity", "sigma_min", "sigma_max", "seebeck",
              "seebeck_max", "peltier", "kelvin", "peltier_max", "thermal_conductivity",
              "k_min", "k_max", "anisotropy", "radiative", "radiation_exponent",
              "radiative_min", "radiative_max", "cooling", "cooling_max", "wall_source",
              "wall_source_envelope", "initial_temperature", "theta_anode", "theta_cathode",
              "g_anode", "g_cathode", "species"});
  MaterialModel m;
  const json& pc = require(j, path, "constants");
  check_keys(pc, path + ".constants",
             {"density", "heat_capacity", "faraday", "gas_constant", "stefan_boltzmann"});
  m.constants.density = require_number(pc, path + ".constants", "density");
  m.constants.heat_capacity = require_number(pc, path + ".constants", "heat_capacity");
  m.constants.faraday = number_or(pc, path + ".constants", "faraday", 9.6485e4);
  m.constants.gas_constant = number_or(pc, path + ".constants", "gas_constant", 8.314);
  m.constants.stefan_boltzmann =
      number_or(pc, path + ".constants", "stefan_boltzmann", 5.67e-8);

  if (j.contains("theta_range")) {
    const auto tr = j.at("theta_range").get<std::vector<double>>();
    if (tr.size() != 2) throw ConfigError("'material.theta_range' must have two entries");
    m.theta_lo = tr[0];
    m.theta_hi = tr[1];
  }
  m.conductivity = law_from_json(require(j, path, "conductivity"), path + ".conductivity");
  m.sigma_min = require_number(j, path, "sigma_min");
  m.sigma_max = require_number(j, path, "sigma_max");
  m.seebeck = law_from_json(require(j, path, "seebeck"), path + ".seebeck");
  m.seebeck_max = require_number(j, path, "seebeck_max");
  m.kelvin = j.contains("kelvin") ? j.at("kelvin").get<bool>() : false;
  if (j.contains("peltier")) m.peltier = law_from_json(j.at("peltier"), path + ".peltier");
  m.peltier_max = require_number(j, path, "peltier_max");
  m.thermal_conductivity =
      law_from_json(require(j, path, "thermal_conductivity"), path + ".thermal_conductivity");
  m.k_min = require_number(j, path, "k_min");
  m.k_max = require_number(j, path, "k_max");
  if (j.contains("anisotropy")) {
    const auto an = j.at("anisotropy").get<std::vector<double>>();
    if (an.size() != 3) throw ConfigError("'material.anisotropy' must have three entries");
    m.anisotropy = {an[0], an[1], an[2]};
  }
  m.radiative = law_from_json(require(j, path, "radiative"), path + ".radiative");
  m.radiation_exponent = number_or(j, path, "radiation_exponent", 5.0);
  m.radiative_min = require_number(j, path, "radiative_min");
  m.radiative_max = require_number(j, path, "radiative_max");
  m.cooling = law_from_json(require(j, path, "cooling"), path + ".cooling");
  m.cooling_max = require_number(j, path, "cooling_max");
  m.wall_source = law_from_json(require(j, path, "wall_source"), path + ".wall_source");
  m.wall_source_envelope = require_number(j, path, "wall_source_envelope");
  m.initial_temperature =
      law_from_json(require(j, path, "initial_temperature"), path + ".initial_temperature");
  m.theta_anode = number_or(j, path, "theta_anode", 0.0);
  m.theta_cathode = number_or(j, path, "theta_cathode", 0.0);
  m.g_anode = number_or(j, path, "g_anode", 0.0);
  m.g_cathode = number_or(j, path, "g_cathode", 0.0);

  for (const json& js : require(j, path, "species")) {
    const std::string sp_path = path + ".species";
    check_keys(js, sp_path,
               {"name", "valence", "diffusion", "diffusion_min", "diffusion_max", "soret",
                "soret_max", "dufour", "dufour_max", "dufour_reciprocal", "transference",
                "transference_max", "initial", "bv_anode", "bv_cathode", "bv_cap",
                "bv_growth", "bv_envelope"});
    SpeciesSpec sp;
    sp.name = require(js, sp_path, "name").get<std::string>();
    sp.valence = int_or(js, sp_path, "valence", 1);
    sp.diffusion = law_from_json(require(js, sp_path, "diffusion"), sp_path + ".diffusion");
    sp.diffusion_min = require_number(js, sp_path, "diffusion_min");
    sp.diffusion_max = require_number(js, sp_path, "diffusion_max");
    sp.soret = js.contains("soret") ? law_from_json(js.at("soret"), sp_path + ".soret")
                                    : Law{ConstantLaw{0.0}};
    sp.soret_max = number_or(js, sp_path, "soret_max", 0.0);
    sp.dufour = js.contains("dufour") ? law_from_json(js.at("dufour"), sp_path + ".dufour")
                                      : Law{ConstantLaw{0.0}};
    sp.dufour_max = number_or(js, sp_path, "dufour_max", 0.0);
    sp.dufour_reciprocal = number_or(js, sp_path, "dufour_reciprocal", 0.0);
    sp.transference = js.contains("transference")
                          ? law_from_json(js.at("transference"), sp_path + ".transference")
                          : Law{ConstantLaw{0.0}};
    sp.transference_max = number_or(js, sp_path, "transference_max", 0.0);
    sp.initial = law_from_json(require(js, sp_path, "initial"), sp_path + ".initial");
    if (js.contains("bv_anode")) sp.bv_anode = bv_from_json(js.at("bv_anode"), sp_path + ".bv_anode");
    if (js.contains("bv_cathode"))
      sp.bv_cathode = bv_from_json(js.at("bv_cathode"), sp_path + ".bv_cathode");
    sp.bv_cap = number_or(js, sp_path, "bv_cap", 30.0);
    sp.bv_growth = number_or(js, sp_path, "bv_growth", 0.0);
    sp.bv_envelope = number_or(js, sp_path, "bv_envelope", 0.0);
    m.species.push_back(std::move(sp));
  }
  return m;
}

inline json explicit_model_to_json(const MaterialModel& m) {
  json j;
  j["constants"] = json{{"density", m.constants.density},
                        {"heat_capacity", m.constants.heat_capacity},
                        {"faraday", m.constants.faraday},
                        {"gas_constant", m.constants.gas_constant},
                        {"stefan_boltzmann", m.constants.stefan_boltzmann}};
  j["theta_range"] = std::vector<double>{m.theta_lo, m.theta_hi};
  j["conductivity"] = law_to_json(m.conductivity);
  j["sigma_min"] = m.sigma_min;
  j["sigma_max"] = m.sigma_max;
  j["seebeck"] = law_to_json(m.seebeck);
  j["seebeck_max"] = m.seebeck_max;
  j["kelvin"] = m.kelvin;
  j["peltier"] = law_to_json(m.peltier);
  j["peltier_max"] = m.peltier_max;
  j["thermal_conductivity"] = law_to_json(m.thermal_conductivity);
  j["k_min"] = m.k_min;
  j["k_max"] = m.k_max;
  j["anisotropy"] = std::vector<double>{m.anisotropy[0], m.anisotropy[1], m.anisotropy[2]};
  j["radiative"] = law_to_json(m.radiative);
  j["radiation_exponent"] = m.radiation_exponent;
  j["radiative_min"] = m.radiative_min;
  j["radiative_max"] = m.radiative_max;
  j["cooling"] = law_to_json(m.cooling);
  j["cooling_max"] = m.cooling_max;
  j["wall_source"] = law_to_json(m.wall_source);
  j["wall_source_envelope"] = m.wall_source_envelope;
  j["initial_temperature"] = law_to_json(m.initial_temperature);
  j["theta_anode"] = m.theta_anode;
  j["theta_cathode"] = m.theta_cathode;
  j["g_anode"] = m.g_anode;
  j["g_cathode"] = m.g_cathode;
  json species = json::array();
  for (const auto& sp : m.species) {
    json js;
    js["name"] = sp.name;
    js["valence"] = sp.valence;
    js["diffusion"] = law_to_json(sp.diffusion);
    js["diffusion_min"] = sp.diffusion_min;
    js["diffusion_max"] = sp.diffusion_max;
    js["soret"] = law_to_json(sp.soret);
    js["soret_max"] = sp.soret_max;
    js["dufour"] = law_to_json(sp.dufour);
    js["dufour_max"] = sp.dufour_max;
    js["dufour_reciprocal"] = sp.dufour_reciprocal;
    js["transference"] = law_to_json(sp.transference);
    js["transference_max"] = sp.transference_max;
    js["initial"] = law_to_json(sp.initial);
    js["bv_anode"] = bv_to_json(sp.bv_anode);
    js["bv_cathode"] = bv_to_json(sp.bv_cathode);
    js["bv_cap"] = sp.bv_cap;
    js["bv_growth"] = sp.bv_growth;
    js["bv_envelope"] = sp.bv_envelope;
    species.push_back(js);
  }
  j["species"] = species;
  return j;
}

// Named numeric overrides applied on top of the nacl-downs preset; sweeps
// address these by key.
inline MaterialModel apply_preset_overrides(const json& ov) {
  using namespace cfg_detail;
  check_keys(ov, "material.overrides",
             {"emissivity", "seebeck_max", "theta_knee", "peltier_max", "cooling",
              "cooling_max", "exchange_current", "eq_potential_anode", "eq_potential_cathode",
              "bv_cap", "g_current", "theta0"});
  NaClPresetInfo info;
  info.emissivity = number_or(ov, "material.overrides", "emissivity", info.emissivity);
  info.seebeck_default = number_or(ov, "material.overrides", "seebeck_max", info.seebeck_default);
  info.theta_knee = number_or(ov, "material.overrides", "theta_knee", info.theta_knee);
  info.operating_current =
      number_or(ov, "material.overrides", "g_current", info.operating_current);
  info.theta0 = number_or(ov, "material.overrides", "theta0", info.theta0);
  MaterialModel m = nacl_preset_model(info);
  if (ov.contains("peltier_max")) {
    m.peltier_max = ov.at("peltier_max").get<double>();
    // A direct Peltier bound detaches the Kelvin tie between alpha and Pi.
    m.kelvin = false;
    m.peltier = ConstantLaw{std::min(m.peltier_max, info.seebeck_default * info.theta_knee)};
  }
  if (ov.contains("cooling")) m.cooling = ConstantLaw{ov.at("cooling").get<double>()};
  if (ov.contains("cooling_max")) m.cooling_max = ov.at("cooling_max").get<double>();
  for (auto& sp : m.species) {
    if (ov.contains("exchange_current")) {
      const double jex = ov.at("exchange_current").get<double>();
      if (sp.bv_anode.enabled) sp.bv_anode.exchange_current = jex;
      if (sp.bv_cathode.enabled) sp.bv_cathode.exchange_current = jex;
    }
    if (ov.contains("eq_potential_anode") && sp.bv_anode.enabled)
      sp.bv_anode.eq_potential = ov.at("eq_potential_anode").get<double>();
    if (ov.contains("eq_potential_cathode") && sp.bv_cathode.enabled)
      sp.bv_cathode.eq_potential = ov.at("eq_potential_cathode").get<double>();
    if (ov.contains("bv_cap")) sp.bv_cap = ov.at("bv_cap").get<double>();
  }
  return m;
}

inline MaterialConfig material_from_json(const json& j) {
  MaterialConfig mc;
  if (j.contains("preset")) {
    cfg_detail::check_keys(j, "material", {"preset", "overrides"});
    mc.preset = j.at("preset").get<std::string>();
    if (mc.preset != "nacl-downs")
      throw ConfigError("unknown material preset '" + mc.preset + "'");
    mc.overrides = j.contains("overrides") ? j.at("overrides") : json::object();
    mc.explicit_model = apply_preset_overrides(mc.overrides);
  } else {
    mc.explicit_model = explicit_model_from_json(j);
  }
  return mc;
}

inline json material_to_json(const MaterialConfig& mc) {
  if (!mc.preset.empty()) {
    json j{{"preset", mc.preset}};
    if (!mc.overrides.empty()) j["overrides"] = mc.overrides;
    return j;
  }
  return explicit_model_to_json(*mc.explicit_model);
}

inline SolverConfig solver_from_json(const json& j) {
  using namespace cfg_detail;
  check_keys(j, "solver",
             {"dt", "t_final", "picard", "lin_tol", "compat_tol", "newton_tol", "max_newton"});
  SolverConfig s;
  s.dt = require_number(j, "solver", "dt");
  s.t_final = require_number(j, "solver", "t_final");
  if (j.contains("picard")) {
    const json& p = j.at("picard");
    check_keys(p, "solver.picard", {"tol", "max_iters", "relaxation"});
    s.picard.tol = number_or(p, "solver.picard", "tol", s.picard.tol);
    s.picard.max_iters = int_or(p, "solver.picard", "max_iters", s.picard.max_iters);
    s.picard.relaxation = number_or(p, "solver.picard", "relaxation", s.picard.relaxation);
    if (s.picard.relaxation <= 0.0 || s.picard.relaxation > 1.0)
      throw ConfigError("'solver.picard.relaxation' must lie in (0, 1]");
  }
  const double lin_tol = number_or(j, "solver", "lin_tol", 1e-12);
  s.picard.potential.lin_tol = lin_tol;
  s.picard.species.lin_tol = lin_tol;
  s.picard.temperature.lin_tol = lin_tol;
  s.picard.potential.compat_tol = number_or(j, "solver", "compat_tol", 1e-8);
  s.picard.temperature.newton_tol = number_or(j, "solver", "newton_tol", 1e-10);
  s.picard.temperature.max_newton = int_or(j, "solver", "max_newton", 50);
  return s;
}

inline json solver_to_json(const SolverConfig& s) {
  return json{{"dt", s.dt},
              {"t_final", s.t_final},
              {"picard", json{{"tol", s.picard.tol},
                              {"max_iters", s.picard.max_iters},
                              {"relaxation", s.picard.relaxation}}},
              {"lin_tol", s.picard.potential.lin_tol},
              {"compat_tol", s.picard.potential.compat_tol},
              {"newton_tol", s.picard.temperature.newton_tol},
              {"max_newton", s.picard.temperature.max_newton}};
}

inline CertificateConfig certificate_from_json(const json& j) {
  using namespace cfg_detail;
  check_keys(j, "certificate", {"symbolic", "constants", "norm_overrides"});
  CertificateConfig c;
  c.symbolic = j.contains("symbolic") ? j.at("symbolic").get<bool>() : false;
  if (j.contains("constants")) {
    const json& k = j.at("constants");
    const std::string path = "certificate.constants";
    check_keys(k, path,
               {"trace_2", "trace_p", "poincare_2", "poincare_p", "regularity", "m1", "m2",
                "m3", "elliptic_trace", "upsilon", "kappa", "delta", "p", "ell", "n",
                "time_horizon"});
    auto& e = c.constants;
    e.trace_2 = number_or(k, path, "trace_2", e.trace_2);
    e.trace_p = number_or(k, path, "trace_p", e.trace_p);
    e.poincare_2 = number_or(k, path, "poincare_2", e.poincare_2);
    e.poincare_p = number_or(k, path, "poincare_p", e.poincare_p);
    e.regularity = number_or(k, path, "regularity", e.regularity);
    e.m1 = number_or(k, path, "m1", e.m1);
    e.m2 = number_or(k, path, "m2", e.m2);
    e.m3 = number_or(k, path, "m3", e.m3);
    e.elliptic_trace = number_or(k, path, "elliptic_trace", e.elliptic_trace);
    e.upsilon = number_or(k, path, "upsilon", e.upsilon);
    e.kappa = number_or(k, path, "kappa", e.kappa);
    e.delta = number_or(k, path, "delta", e.delta);
    e.p = number_or(k, path, "p", e.p);
    e.ell = number_or(k, path, "ell", e.ell);
    e.n = int_or(k, path, "n", e.n);
    e.time_horizon = number_or(k, path, "time_horizon", e.time_horizon);
  }
  c.norm_overrides = j.contains("norm_overrides") ? j.at("norm_overrides") : json::object();
  cfg_detail::check_keys(c.norm_overrides, "certificate.norm_overrides",
                         {"omega", "g_l2_gamma", "g_lp_gamma", "theta0_l2", "theta0_lp",
                          "gamma_w_lp", "gamma_w_lellp", "gamma_w_pow", "gamma_e_l2",
                          "gamma_e_lp", "gamma_e_lpp"});
  return c;
}

inline json certificate_to_json(const CertificateConfig& c) {
  const auto& e = c.constants;
  json k{{"trace_2", e.trace_2},
         {"trace_p", e.trace_p},
         {"poincare_2", e.poincare_2},
         {"poincare_p", e.poincare_p},
         {"regularity", e.regularity},
         {"m1", e.m1},
         {"m2", e.m2},
         {"m3", e.m3},
         {"elliptic_trace", e.elliptic_trace},
         {"upsilon", e.upsilon},
         {"kappa", e.kappa},
         {"delta", e.delta},
         {"p", e.p},
         {"ell", e.ell},
         {"n", e.n},
         {"time_horizon", e.time_horizon}};
  json j{{"symbolic", c.symbolic}, {"constants", k}};
  if (!c.norm_overrides.empty()) j["norm_overrides"] = c.norm_overrides;
  return j;
}

inline OutputConfig output_from_json(const json& j) {
  using namespace cfg_detail;
  check_keys(j, "output", {"directory", "snapshot_every", "write_vtk"});
  OutputConfig o;
  if (j.contains("directory")) o.directory = j.at("directory").get<std::string>();
  o.snapshot_every = int_or(j, "output", "snapshot_every", 0);
  o.write_vtk = j.contains("write_vtk") ? j.at("write_vtk").get<bool>() : false;
  return o;
}

inline json output_to_json(const OutputConfig& o) {
  return json{{"directory", o.directory},
              {"snapshot_every", o.snapshot_every},
              {"write_vtk", o.write_vtk}};
}

inline CellConfig config_from_json(const json& j) {
  using namespace cfg_detail;
  check_keys(j, "config",
             {"version", "geometry", "material", "solver", "certificate", "output"});
  CellConfig c;
  c.version = int_or(j, "config", "version", 1);
  if (c.version != 1) throw ConfigError("unsupported config version");
  c.geometry = geometry_from_json(require(j, "config", "geometry"));
  c.material = material_from_json(require(j, "config", "material"));
  c.solver = solver_from_json(require(j, "config", "solver"));
  if (j.contains("certificate")) c.certificate = certificate_from_json(j.at("certificate"));
  c.certificate.constants.ell = c.material.explicit_model->radiation_exponent;
  if (j.contains("output")) c.output = output_from_json(j.at("output"));
  return c;
}

inline json config_to_json(const CellConfig& c) {
  return json{{"version", c.version},
              {"geometry", geometry_to_json(c.geometry)},
              {"material", material_to_json(c.material)},
              {"solver", solver_to_json(c.solver)},
              {"certificate", certificate_to_json(c.certificate)},
              {"output", output_to_json(c.output)}};
}

inline CellConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

inline CertificateNorms certificate_norms_for(const CellConfig& c, const Mesh& mesh,
                                              const MaterialModel& model) {
  CertificateNorms nm = compute_certificate_norms(mesh, model, c.certificate.constants);
  const json& ov = c.certificate.norm_overrides;
  auto set = [&](const char* key, double& field) {
    if (ov.contains(key)) field = ov.at(key).get<double>();
  };
  set("omega", nm.omega);
  set("g_l2_gamma", nm.g_l2_gamma);
  set("g_lp_gamma", nm.g_lp_gamma);
  set("theta0_l2", nm.theta0_l2);
  set("theta0_lp", nm.theta0_lp);
  set("gamma_w_lp", nm.gamma_w_lp);
  set("gamma_w_lellp", nm.gamma_w_lellp);
  set("gamma_w_pow", nm.gamma_w_pow);
  set("gamma_e_l2", nm.gamma_e_l2);
  set("gamma_e_lp", nm.gamma_e_lp);
  set("gamma_e_lpp", nm.gamma_e_lpp);
  return nm;
}

// Default molten-NaCl run: 1-D reduction of the cell between the electrodes,
// with the certificate block keeping the full cell volume.
inline CellConfig nacl_default_config() {
  CellConfig c;
  c.geometry.dimension = 1;
  c.geometry.length = 0.13;
  c.geometry.cells = 64;
  c.geometry.left = BoundaryTag::anode;
  c.geometry.right = BoundaryTag::cathode;
  c.material.preset = "nacl-downs";
  c.material.explicit_model = nacl_preset_model();
  c.solver.dt = 1.0;
  c.solver.t_final = 60.0;
  c.solver.picard.tol = 1e-8;
  c.solver.picard.max_iters = 50;
  c.solver.picard.relaxation = 0.7;
  c.certificate.constants.n = 3;
  c.certificate.constants.p = 2.0;
  c.certificate.constants.ell = 5.0;
  c.certificate.constants.time_horizon = 1.0;
  c.certificate.norm_overrides = json{{"omega", 1.5e-3}};
  return c;
}

inline std::pair<MaterialModel, CellConfig> nacl_preset() {
  CellConfig c = nacl_default_config();
  return {*c.material.explicit_model, c};
}

}  // namespace tec
