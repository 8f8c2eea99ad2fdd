#pragma once

#include <atomic>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tec/core.hpp"
#include "tec/mesh.hpp"

namespace tec {

struct PhysicalConstants {
  double faraday = 9.6485e4;          // F [C/mol]
  double gas_constant = 8.314;        // R [J/(mol K)]
  double stefan_boltzmann = 5.67e-8;  // sigma_SB [W/(m^2 K^4)]
  double density = 0.0;               // rho [kg/m^3]
  double heat_capacity = 0.0;         // c_p [J/(kg K)]
};

// Coefficient laws: measurable in x, continuous in (theta, c). The supported
// shapes cover constants, piecewise data in x, polynomial or tabulated
// temperature dependence, plus two structured laws used for Soret/Dufour
// coefficients whose bounds involve the concentration and R*theta^2 weights.
struct ConstantLaw {
  double value = 0.0;
};

struct PiecewiseXLaw {
  std::vector<double> breaks;  // ascending x breakpoints between segments
  std::vector<double> values;  // values.size() == breaks.size() + 1
};

struct PolyThetaLaw {
  std::vector<double> coeffs;  // sum_k coeffs[k] * theta^k
};

struct TableThetaLaw {
  std::vector<double> theta;   // ascending
  std::vector<double> values;  // linear interpolation, clamped at the ends
};

// value0 * min(1, c_ref/|c|): keeps c*S bounded by value0*c_ref for all c.
struct SaturatingCLaw {
  double value0 = 0.0;
  double c_ref = 1.0;
};

// bound / (R * theta^2): keeps R*theta^2*D' exactly at `bound`.
struct InverseRThetaSqLaw {
  double bound = 0.0;
  double gas_constant = 8.314;
};

// Seebeck-style decay alpha0 * min(1, theta_knee/theta); paired with the
// Kelvin relation Pi = alpha*theta it caps the Peltier coefficient at
// alpha0*theta_knee while keeping Pi = alpha*theta pointwise.
struct DecayThetaLaw {
  double value0 = 0.0;
  double theta_knee = 0.0;
};

using Law = std::variant<ConstantLaw, PiecewiseXLaw, PolyThetaLaw, TableThetaLaw,
                         SaturatingCLaw, InverseRThetaSqLaw, DecayThetaLaw>;

inline double eval_law(const Law& law, double x, double theta, double c) {
  struct V {
    double x, theta, c;
    double operator()(const ConstantLaw& l) const { return l.value; }
    double operator()(const PiecewiseXLaw& l) const {
      std::size_t k = 0;
      while (k < l.breaks.size() && x >= l.breaks[k]) ++k;
      return l.values.at(k);
    }
    double operator()(const PolyThetaLaw& l) const {
      double v = 0.0, t = 1.0;
      for (double ck : l.coeffs) {
        v += ck * t;
        t *= theta;
      }
      return v;
    }
    double operator()(const TableThetaLaw& l) const {
      const auto& ts = l.theta;
      const auto& vs = l.values;
      if (ts.empty()) return 0.0;
      if (theta <= ts.front()) return vs.front();
      if (theta >= ts.back()) return vs.back();
      std::size_t k = 1;
      while (ts[k] < theta) ++k;
      const double w = (theta - ts[k - 1]) / (ts[k] - ts[k - 1]);
      return (1.0 - w) * vs[k - 1] + w * vs[k];
    }
    double operator()(const SaturatingCLaw& l) const {
      const double a = std::abs(c);
      return a <= l.c_ref ? l.value0 : l.value0 * l.c_ref / a;
    }
    double operator()(const InverseRThetaSqLaw& l) const {
      return l.bound / (l.gas_constant * theta * theta);
    }
    double operator()(const DecayThetaLaw& l) const {
      return theta <= l.theta_knee ? l.value0 : l.value0 * l.theta_knee / theta;
    }
  };
  return std::visit(V{x, theta, c}, law);
}

struct ButlerVolmerElectrode {
  bool enabled = false;
  double exchange_current = 0.0;  // J_l [A/m^2]
  double beta = 0.5;              // transfer coefficient, 0 < beta < 1
  int electrons = 1;              // s_l
  double eq_potential = 0.0;      // phi_eq [V], in the zero-boundary-mean gauge
};

struct SpeciesSpec {
  std::string name;
  int valence = 1;    // z_i (signed)
  Law diffusion;      // D_i(x, theta) [m^2/s]
  Law soret;          // S_i(x, c, theta) [m^2/(s K)]
  Law dufour;         // D_i'(x, c, theta) [m^2/(s K)]
  Law transference;   // t_i(x), dimensionless
  Law initial;        // c_i^0(x) [mol/m^3]
  ButlerVolmerElectrode bv_anode;
  ButlerVolmerElectrode bv_cathode;
  double bv_cap = 30.0;  // truncation of the exponent argument

  // Declared bounds.
  double diffusion_min = 0.0;      // (D_i)_#
  double diffusion_max = 0.0;      // D_i^# (includes the F|z_i| factor)
  double soret_max = 0.0;          // S_i^#: bound on |c*S|
  double dufour_max = 0.0;         // (D_i')^#: bound on R*theta^2*|D'|
  double dufour_reciprocal = 0.0;  // optional stored 1/(D_i')^#; 0 = unset
  double transference_max = 0.0;   // t_i^#: t(x) <= F|z_i|*t_i^#
  double bv_growth = 0.0;          // g_i^#
  double bv_envelope = 0.0;        // gamma_i constant envelope [A/m^2]
};

struct ModelDiagnostics {
  std::atomic<long> clamp_events{0};
};

struct MaterialModel {
  PhysicalConstants constants;
  std::vector<SpeciesSpec> species;

  Law conductivity;           // sigma(x, theta) [S/m]
  Law seebeck;                // alpha(x, theta) [V/K]
  Law peltier;                // Pi(x, theta) [V]; ignored when kelvin = true
  bool kelvin = false;        // Pi = alpha * theta
  Law thermal_conductivity;   // k(x, theta) [W/(m K)], K = k * anisotropy
  std::array<double, 3> anisotropy{1.0, 0.0, 1.0};  // symmetric {axx, axy, ayy}
  Law radiative;              // h_R(x, theta) on the wall
  double radiation_exponent = 5.0;  // ell >= 2
  Law cooling;                // h_C(x, theta) on the electrodes
  Law wall_source;            // gamma(x, theta) on the wall
  Law initial_temperature;    // theta_0(x) [K]
  double theta_anode = 0.0;   // theta_a [K]
  double theta_cathode = 0.0; // theta_c [K]
  double g_anode = 0.0;       // prescribed surface current on Gamma_a [A/m^2]
  double g_cathode = 0.0;     // on Gamma_c [A/m^2]

  // Declared bounds.
  double sigma_min = 0.0, sigma_max = 0.0;          // sigma_#, sigma^#
  double seebeck_max = 0.0;                         // alpha^#
  double peltier_max = 0.0;                         // Pi^#
  double k_min = 0.0, k_max = 0.0;                  // k_#, k^#
  double radiative_min = 0.0, radiative_max = 0.0;  // b_#, b^#
  double cooling_max = 0.0;                         // h_C^#
  double wall_source_envelope = 0.0;                // gamma_w constant envelope

  // Admissible temperature window; evaluation clamps outside and counts it.
  double theta_lo = 0.0;
  double theta_hi = 1e30;

  std::shared_ptr<ModelDiagnostics> diagnostics = std::make_shared<ModelDiagnostics>();

  double clamp_theta(double theta) const {
    if (theta < theta_lo || theta > theta_hi) {
      diagnostics->clamp_events.fetch_add(1, std::memory_order_relaxed);
      return std::clamp(theta, theta_lo, theta_hi);
    }
    return theta;
  }
};

struct SpeciesCoefficients {
  int valence = 1;
  double diffusion = 0.0;
  double soret = 0.0;
  double dufour = 0.0;
  double transference = 0.0;
};

struct CoefficientSet {
  double sigma = 0.0;
  double seebeck = 0.0;
  double peltier = 0.0;
  std::array<double, 3> conductivity{0.0, 0.0, 0.0};  // K = {kxx, kxy, kyy}
  std::vector<SpeciesCoefficients> species;
  bool clamped = false;
};

inline CoefficientSet evaluate_coefficients(const MaterialModel& m, double x, double theta,
                                            const std::vector<double>& c) {
  CoefficientSet out;
  const double th = m.clamp_theta(theta);
  out.clamped = (th != theta);
  out.sigma = eval_law(m.conductivity, x, th, 0.0);
  out.seebeck = eval_law(m.seebeck, x, th, 0.0);
  out.peltier = m.kelvin ? out.seebeck * th : eval_law(m.peltier, x, th, 0.0);
  const double k = eval_law(m.thermal_conductivity, x, th, 0.0);
  out.conductivity = {k * m.anisotropy[0], k * m.anisotropy[1], k * m.anisotropy[2]};
  out.species.resize(m.species.size());
  for (std::size_t i = 0; i < m.species.size(); ++i) {
    const auto& sp = m.species[i];
    const double ci = i < c.size() ? c[i] : 0.0;
    out.species[i].valence = sp.valence;
    out.species[i].diffusion = eval_law(sp.diffusion, x, th, ci);
    out.species[i].soret = eval_law(sp.soret, x, th, ci);
    out.species[i].dufour = eval_law(sp.dufour, x, th, ci);
    out.species[i].transference = eval_law(sp.transference, x, th, ci);
  }
  return out;
}

struct NernstEinstein {
  double mobility = 0.0;      // u_i [m^2/(V s)]
  double transference = 0.0;  // t_i = F z_i u_i c_i / sigma
};

// u_i = z_i D_i F / (R theta); ionic conductivity sigma_i = F z_i u_i c_i,
// t_i = sigma_i / sigma.
inline NernstEinstein nernst_einstein(const MaterialModel& m, std::size_t i, double theta,
                                      double c, double x = 0.0) {
  if (!(theta > 0.0)) throw DomainError("nernst_einstein: theta must be positive");
  if (i >= m.species.size()) throw DomainError("nernst_einstein: no such species");
  const auto& sp = m.species[i];
  const double th = m.clamp_theta(theta);
  const double D = eval_law(sp.diffusion, x, th, c);
  const double sigma = eval_law(m.conductivity, x, th, 0.0);
  if (!(sigma > 0.0)) throw DomainError("nernst_einstein: sigma must be positive");
  NernstEinstein out;
  out.mobility = sp.valence * D * m.constants.faraday / (m.constants.gas_constant * theta);
  out.transference = m.constants.faraday * sp.valence * out.mobility * c / sigma;
  return out;
}

struct HypothesisViolation {
  std::string hypothesis;  // e.g. "sigma lower bound"
  std::string message;
  double x = 0.0, theta = 0.0, c = 0.0;  // witness point
};

struct ValidationReport {
  std::vector<HypothesisViolation> violations;
  double surface_current_defect = 0.0;  // \int_Gamma g ds
  bool ok() const { return violations.empty(); }
};

namespace detail {
inline void check_bound(std::vector<HypothesisViolation>& out, bool ok, const std::string& hyp,
                        const std::string& msg, double x, double theta, double c) {
  if (!ok) out.push_back({hyp, msg, x, theta, c});
}
}  // namespace detail

// Samples every coefficient on a (x, theta, c) grid and checks the declared
// bound inequalities; violations are report entries, not errors. The mesh
// provides electrode measures for the surface-current compatibility check.
inline ValidationReport validate_hypotheses(const MaterialModel& m, const Mesh& mesh,
                                            int samples = 16) {
  ValidationReport rep;
  const int ns = std::max(2, samples);
  double xmax = 0.0;
  for (const auto& nd : mesh.nodes) xmax = std::max(xmax, std::max(nd[0], nd[1]));
  if (xmax <= 0.0) xmax = 1.0;

  double cmax = 1.0;
  for (const auto& sp : m.species)
    for (int k = 0; k < ns; ++k)
      cmax = std::max(cmax, 2.0 * std::abs(eval_law(sp.initial, xmax * k / (ns - 1.0), m.theta_lo, 0.0)));

  const double F = m.constants.faraday;
  const double R = m.constants.gas_constant;
  for (int ix = 0; ix < ns; ++ix) {
    const double x = xmax * ix / (ns - 1.0);
    for (int it = 0; it < ns; ++it) {
      const double th = m.theta_lo + (m.theta_hi - m.theta_lo) * it / (ns - 1.0);
      for (int ic = 0; ic < ns; ++ic) {
        const double c = cmax * ic / (ns - 1.0);
        const double sigma = eval_law(m.conductivity, x, th, c);
        detail::check_bound(rep.violations, sigma >= m.sigma_min * (1.0 - 1e-12), "sigma lower bound",
                            "sigma < sigma_#", x, th, c);
        detail::check_bound(rep.violations, sigma <= m.sigma_max * (1.0 + 1e-12), "sigma upper bound",
                            "sigma > sigma^#", x, th, c);
        const double alpha = eval_law(m.seebeck, x, th, c);
        detail::check_bound(rep.violations, std::abs(alpha) <= m.seebeck_max * (1.0 + 1e-12),
                            "seebeck bound", "|alpha| > alpha^#", x, th, c);
        const double pi = m.kelvin ? alpha * th : eval_law(m.peltier, x, th, c);
        detail::check_bound(rep.violations, std::abs(pi) <= m.peltier_max * (1.0 + 1e-12), "peltier bound",
                            "|Pi| > Pi^#", x, th, c);
        const double k = eval_law(m.thermal_conductivity, x, th, c);
        const double axx = k * m.anisotropy[0], axy = k * m.anisotropy[1],
                     ayy = k * m.anisotropy[2];
        // Ellipticity of the symmetric 2x2 block: smallest eigenvalue >= k_#.
        const double tr = axx + ayy, det = axx * ayy - axy * axy;
        const double lmin = 0.5 * (tr - std::sqrt(std::max(0.0, tr * tr - 4.0 * det)));
        const double ell_min = mesh.dimension == 1 ? axx : lmin;
        detail::check_bound(rep.violations, ell_min >= m.k_min * (1.0 - 1e-12), "conductivity ellipticity",
                            "xi^T K xi < k_# |xi|^2", x, th, c);
        const double entry_max =
            std::max({std::abs(axx), std::abs(axy), std::abs(ayy)});
        detail::check_bound(rep.violations, entry_max <= m.k_max * (1.0 + 1e-12), "conductivity entry bound",
                            "|K_jl| > k^#", x, th, c);
        const double hr = eval_law(m.radiative, x, th, c);
        detail::check_bound(rep.violations, hr >= m.radiative_min * (1.0 - 1e-12), "radiative lower bound",
                            "h_R < b_#", x, th, c);
        detail::check_bound(rep.violations, hr <= m.radiative_max * (1.0 + 1e-12), "radiative upper bound",
                            "h_R > b^#", x, th, c);
        const double hc = eval_law(m.cooling, x, th, c);
        detail::check_bound(rep.violations, hc >= 0.0 && hc <= m.cooling_max * (1.0 + 1e-12), "cooling bound",
                            "h_C outside [0, h_C^#]", x, th, c);
        const double gw = eval_law(m.wall_source, x, th, c);
        detail::check_bound(rep.violations, std::abs(gw) <= m.wall_source_envelope * (1.0 + 1e-12),
                            "wall source envelope", "|gamma| > gamma_w", x, th, c);

        for (const auto& sp : m.species) {
          const double D = eval_law(sp.diffusion, x, th, c);
          detail::check_bound(rep.violations, D >= sp.diffusion_min * (1.0 - 1e-12),
                              sp.name + " diffusion lower bound", "D < (D_i)_#", x, th, c);
          detail::check_bound(rep.violations,
                              F * std::abs(sp.valence) * D <= sp.diffusion_max * (1.0 + 1e-12),
                              sp.name + " diffusion upper bound", "F|z|D > D_i^#", x, th, c);
          const double S = eval_law(sp.soret, x, th, c);
          detail::check_bound(rep.violations, std::abs(c * S) <= sp.soret_max * (1.0 + 1e-12),
                              sp.name + " soret bound", "|c S| > S_i^#", x, th, c);
          const double Dp = eval_law(sp.dufour, x, th, c);
          detail::check_bound(rep.violations,
                              R * th * th * std::abs(Dp) <= sp.dufour_max * (1.0 + 1e-12),
                              sp.name + " dufour bound", "R theta^2 |D'| > (D_i')^#", x, th, c);
          const double t = eval_law(sp.transference, x, th, c);
          detail::check_bound(rep.violations,
                              t >= 0.0 &&
                                  t <= F * std::abs(sp.valence) * sp.transference_max * (1.0 + 1e-12),
                              sp.name + " transference bound", "t outside [0, F|z| t_i^#]", x,
                              th, c);
          const bool beta_ok_a = !sp.bv_anode.enabled ||
                                 (sp.bv_anode.beta > 0.0 && sp.bv_anode.beta < 1.0);
          const bool beta_ok_c = !sp.bv_cathode.enabled ||
                                 (sp.bv_cathode.beta > 0.0 && sp.bv_cathode.beta < 1.0);
          detail::check_bound(rep.violations, beta_ok_a && beta_ok_c,
                              sp.name + " transfer coefficient", "beta outside (0,1)", x, th, c);
        }
      }
    }
  }

  rep.surface_current_defect = m.g_anode * boundary_measure(mesh, BoundaryTag::anode) +
                               m.g_cathode * boundary_measure(mesh, BoundaryTag::cathode);
  const double gscale = std::abs(m.g_anode) * boundary_measure(mesh, BoundaryTag::anode) +
                        std::abs(m.g_cathode) * boundary_measure(mesh, BoundaryTag::cathode);
  if (std::abs(rep.surface_current_defect) > 1e-10 * std::max(gscale, 1e-30) && gscale > 0.0)
    rep.violations.push_back({"surface current compatibility",
                              "int_Gamma g ds != 0", 0.0, 0.0, 0.0});
  else if (gscale == 0.0 && rep.surface_current_defect != 0.0)
    rep.violations.push_back({"surface current compatibility",
                              "int_Gamma g ds != 0", 0.0, 0.0, 0.0});
  return rep;
}

// Molten-NaCl (Downs process) cell data. Cylindrical container 13 cm diameter
// and height, stainless steel wall, copper/nickel electrodes; desk-scale runs
// reduce the geometry to an interval or rectangle while the certificate keeps
// the full cell volume.
struct NaClPresetInfo {
  double cell_volume = 1.5e-3;      // [m^3]
  double e0_reduction = -2.71;      // Na+ + e- -> Na [V]
  double e0_oxidation = -1.36;      // 2Cl- -> Cl2 + 2e- [V]
  double e0_cell = -4.07;           // [V]
  double operating_current = 1e4;   // [A/m^2]
  double theta0 = 1080.0;           // [K]
  double emissivity = 0.2;          // default within [0.2, 0.5]
  double seebeck_default = 7.1e-5;  // alpha^# [V/K]
  double theta_knee = 1215.0;       // Pi^# = alpha^# * theta_knee
};

inline MaterialModel nacl_preset_model(const NaClPresetInfo& info = {}) {
  MaterialModel m;
  m.constants.density = 1500.0;
  m.constants.heat_capacity = 1197.8;
  const double F = m.constants.faraday;
  const double R = m.constants.gas_constant;
  const double sb = m.constants.stefan_boltzmann;

  m.theta_lo = 1080.0;
  m.theta_hi = 1250.0;

  m.conductivity = TableThetaLaw{{1080.0, 1250.0}, {359.7, 398.0}};
  m.sigma_min = 359.7;
  m.sigma_max = 398.0;

  m.seebeck = DecayThetaLaw{info.seebeck_default, info.theta_knee};
  m.seebeck_max = info.seebeck_default;
  m.kelvin = true;
  m.peltier = ConstantLaw{0.0};
  m.peltier_max = info.seebeck_default * info.theta_knee;

  m.thermal_conductivity = TableThetaLaw{{1080.0, 1250.0}, {0.5, 0.6}};
  m.k_min = 0.5;
  m.k_max = 0.6;

  m.radiative = ConstantLaw{sb * info.emissivity};
  m.radiation_exponent = 5.0;
  m.radiative_min = sb * info.emissivity;
  m.radiative_max = sb * info.emissivity;
  // Kirchhoff law: absorptivity = emissivity, gamma = sb*eps*theta_w^4.
  const double theta_wall = info.theta0;
  m.wall_source = ConstantLaw{sb * info.emissivity * std::pow(theta_wall, 4)};
  m.wall_source_envelope = sb * info.emissivity * std::pow(theta_wall, 4);

  m.cooling = ConstantLaw{1000.0};
  m.cooling_max = 1820.0;
  m.theta_anode = info.theta0;
  m.theta_cathode = info.theta0;

  m.initial_temperature = ConstantLaw{info.theta0};
  m.g_anode = info.operating_current;
  m.g_cathode = -info.operating_current;

  const double c0 = 2.5667e4;
  auto make_species = [&](const std::string& name, int z, double d_lo, double d_hi,
                          double d_ref, double soret0, double dufour_recip,
                          double transference, bool at_anode, bool at_cathode,
                          double eq_pot) {
    SpeciesSpec sp;
    sp.name = name;
    sp.valence = z;
    sp.diffusion = TableThetaLaw{{1080.0, 1250.0}, {d_lo, d_hi}};
    sp.diffusion_min = d_lo;
    sp.diffusion_max = F * std::abs(z) * d_ref;
    sp.soret = SaturatingCLaw{soret0, c0};
    sp.soret_max = soret0 * c0;
    sp.dufour_reciprocal = dufour_recip;
    sp.dufour_max = 1.0 / dufour_recip;
    sp.dufour = InverseRThetaSqLaw{sp.dufour_max, R};
    sp.transference = ConstantLaw{transference};
    sp.transference_max = sp.diffusion_max * c0 / (R * info.theta0 * m.sigma_min);
    sp.initial = ConstantLaw{c0};
    ButlerVolmerElectrode bv;
    bv.exchange_current = info.operating_current;
    bv.beta = 0.5;
    bv.electrons = 2;
    bv.enabled = true;
    if (at_anode) {
      sp.bv_anode = bv;
      sp.bv_anode.eq_potential = eq_pot;
    }
    if (at_cathode) {
      sp.bv_cathode = bv;
      sp.bv_cathode.eq_potential = eq_pot;
    }
    sp.bv_cap = 30.0;
    // Truncated Butler-Volmer is bounded, so the growth constant is zero and
    // the envelope is the truncation value.
    sp.bv_growth = 0.0;
    const double cap = sp.bv_cap, beta = bv.beta;
    sp.bv_envelope = bv.exchange_current *
                     std::max(std::exp(beta * cap) - std::exp(-(1.0 - beta) * cap),
                              std::exp((1.0 - beta) * cap) - std::exp(-beta * cap));
    return sp;
  };

  // Electrode equilibrium potentials are referenced to the cell's
  // zero-boundary-mean gauge (the Neumann problem fixes phi only up to a
  // constant); +-1.75 V brackets the ohmic drop of the 13 cm cell at 1e4 A/m^2.
  m.species.push_back(make_species("Na+", 1, 7.7e-9, 12e-9, 12e-9, 1.2e-12, 6.9281e5, 0.62,
                                   false, true, -1.75));
  m.species.push_back(make_species("Cl-", -1, 6.3e-9, 9.5e-9, 9.5e-9, 9.5e-11,
                                   6.9281e5 * 12.0 / 9.5, 0.38, true, false, 1.75));
  return m;
}

}  // namespace tec
