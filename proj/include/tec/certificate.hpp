#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tec/core.hpp"
#include "tec/fem.hpp"
#include "tec/materials.hpp"

namespace tec {

// Analysis constants the estimates leave symbolic: trace and Poincare
// embedding constants, the parabolic regularity constant, the elliptic
// regularity constants, and the exponent parameters. All default to 1; the
// coefficient-extraction mode varies them to isolate prefactors.
struct EmbeddingConstants {
  double trace_2 = 1.0;        // continuity constant of W^{1,2n/(n+1)} -> L^2(Gamma)
  double trace_p = 1.0;        // W^{1,pn/(n+p-1)} trace constant
  double poincare_2 = 1.0;     // P_2
  double poincare_p = 1.0;     // P_p
  double regularity = 1.0;     // parabolic gradient regularity constant
  double m1 = 1.0, m2 = 1.0, m3 = 1.0;  // elliptic regularity constants
  double elliptic_trace = 1.0;          // K in the elliptic energy estimate
  double upsilon = 2.0;        // reverse-Holder exponent parameter > 1
  double kappa = 2.0;          // elliptic exponent parameter > 1
  double delta = 0.0;          // 0 -> derived from upsilon/kappa
  double p = 2.0;              // integrability exponent in [2, 2+delta]
  double ell = 5.0;            // boundary power l >= 2
  int n = 3;                   // space dimension for the embeddings
  double time_horizon = 1.0;   // T [s]

  double delta_window() const {
    return std::min(2.0 / (n * (upsilon - 1.0)), 1.0 / (kappa - 1.0));
  }
  void validate() const {
    if (trace_2 <= 0 || trace_p <= 0 || poincare_2 <= 0 || poincare_p <= 0 ||
        regularity <= 0 || m1 < 0 || m2 < 0 || m3 < 0 || elliptic_trace < 0)
      throw DomainError("embedding constants must be positive");
    if (upsilon <= 1.0 || kappa <= 1.0)
      throw DomainError("exponent parameters upsilon, kappa must exceed 1");
    const double d = delta > 0.0 ? delta : delta_window();
    if (p < 2.0 || p > 2.0 + d + 1e-12)
      throw DomainError("exponent p must lie in [2, 2+delta]");
    if (ell < 2.0) throw DomainError("boundary power must satisfy l >= 2");
    if (n < 1 || n > 3) throw DomainError("space dimension must be 1, 2 or 3");
    if (time_horizon <= 0.0) throw DomainError("time horizon must be positive");
  }
};

// Data norms feeding the estimate constants. Defaults are produced from the
// mesh and model by quadrature (time-constant data on the space-time
// cylinders); any entry can be overridden with analytic values.
struct CertificateNorms {
  double omega = 0.0;           // |Omega|
  double g_l2_gamma = 0.0;      // ||g||_{2,Gamma}
  double g_lp_gamma = 0.0;      // ||g||_{p,Gamma}
  double theta0_l2 = 0.0;       // ||theta_0||_{2,Omega}
  double theta0_lp = 0.0;
  std::vector<double> c0_l2;    // per species
  std::vector<double> c0_lp;
  std::vector<double> gamma_i_l2;   // ||gamma_i|| on Gamma x ]0,T[
  std::vector<double> gamma_i_lp;
  std::vector<double> gamma_i_lpp;  // conjugate exponent p'
  double gamma_w_lp = 0.0;          // ||gamma_w||_{p, Sigma_T}
  double gamma_w_lellp = 0.0;       // ||gamma_w||_{l', Sigma_T}
  double gamma_w_pow = 0.0;         // \int_{Sigma_T} |gamma_w|^{(l+p-2)/(l-1)}
  double gamma_e_l2 = 0.0;          // gamma_e = h_C^# |theta_e| on Gamma x ]0,T[
  double gamma_e_lp = 0.0;
  double gamma_e_lpp = 0.0;
};

inline CertificateNorms compute_certificate_norms(const Mesh& mesh, const MaterialModel& model,
                                                  const EmbeddingConstants& ec) {
  CertificateNorms nm;
  const double T = ec.time_horizon;
  const double p = ec.p;
  const double pp = p / (p - 1.0);
  const double lp = ec.ell / (ec.ell - 1.0);
  const double ga = boundary_measure(mesh, BoundaryTag::anode);
  const double gc = boundary_measure(mesh, BoundaryTag::cathode);
  const double gw = boundary_measure(mesh, BoundaryTag::wall);
  nm.omega = mesh.domain_measure;

  auto electrode_norm = [&](double q, double va, double vc) {
    return std::pow(std::pow(std::abs(va), q) * ga + std::pow(std::abs(vc), q) * gc, 1.0 / q);
  };
  nm.g_l2_gamma = electrode_norm(2.0, model.g_anode, model.g_cathode);
  nm.g_lp_gamma = electrode_norm(p, model.g_anode, model.g_cathode);

  const Vector mass = lumped_mass(mesh);
  auto field_norm = [&](const Law& law, double q) {
    double s = 0.0;
    for (int k = 0; k < mesh.num_nodes(); ++k)
      s += mass[k] * std::pow(std::abs(eval_law(law, mesh.nodes[k][0], 0.0, 0.0)), q);
    return std::pow(s, 1.0 / q);
  };
  nm.theta0_l2 = field_norm(model.initial_temperature, 2.0);
  nm.theta0_lp = field_norm(model.initial_temperature, p);
  for (const auto& sp : model.species) {
    nm.c0_l2.push_back(field_norm(sp.initial, 2.0));
    nm.c0_lp.push_back(field_norm(sp.initial, p));
    const double env = sp.bv_envelope;
    const double meas = ga + gc;
    nm.gamma_i_l2.push_back(env * std::pow(meas * T, 1.0 / 2.0));
    nm.gamma_i_lp.push_back(env * std::pow(meas * T, 1.0 / p));
    nm.gamma_i_lpp.push_back(env * std::pow(meas * T, 1.0 / pp));
  }
  const double gwv = model.wall_source_envelope;
  nm.gamma_w_lp = gwv * std::pow(gw * T, 1.0 / p);
  nm.gamma_w_lellp = gwv * std::pow(gw * T, 1.0 / lp);
  nm.gamma_w_pow = std::pow(gwv, (ec.ell + p - 2.0) / (ec.ell - 1.0)) * gw * T;
  const double he = model.cooling_max;
  nm.gamma_e_l2 = he * electrode_norm(2.0, model.theta_anode, model.theta_cathode) *
                  std::pow(T, 1.0 / 2.0);
  nm.gamma_e_lp =
      he * electrode_norm(p, model.theta_anode, model.theta_cathode) * std::pow(T, 1.0 / p);
  nm.gamma_e_lpp =
      he * electrode_norm(pp, model.theta_anode, model.theta_cathode) * std::pow(T, 1.0 / pp);
  return nm;
}

// Z(a, d, e) = a sqrt(1 + T e^T) + e sqrt(1 + d).
inline double z_factor(const EmbeddingConstants& ec, double a, double d, double e) {
  const double T = ec.time_horizon;
  return a * std::sqrt(1.0 + T * std::exp(T)) + e * std::sqrt(1.0 + d);
}

struct EllipticConstants {
  double a_sharp = 0.0;  // multiplies the coupling radii in the potential bound
  double b_sharp = 0.0;  // data part driven by the surface current g
};

namespace cert_detail {
inline double t_exp_factor(const EmbeddingConstants& ec) {
  return 1.0 + ec.time_horizon * std::exp(ec.time_horizon);
}
inline double t_exp_p_factor(const EmbeddingConstants& ec) {
  // (T exp[(p-1)T])^{1/p}
  return std::pow(ec.time_horizon * std::exp((ec.p - 1.0) * ec.time_horizon), 1.0 / ec.p);
}
inline void require_bounds(const MaterialModel& m) {
  if (m.sigma_min <= 0 || m.sigma_max <= 0 || m.k_min <= 0 || m.k_max <= 0 ||
      m.constants.density <= 0 || m.constants.heat_capacity <= 0)
    throw IncompleteModelError("material bounds are missing or nonpositive");
  for (const auto& sp : m.species)
    if (sp.diffusion_min <= 0 || sp.diffusion_max <= 0)
      throw IncompleteModelError("species diffusion bounds are missing");
}
}  // namespace cert_detail

// A^# = sigma_#^{-1} (M1 |Omega|^{1/2-1/p} + M2 sqrt(1+sigma_#));
// B^# = sigma_#^{-1} T^{1/p} (M1 K ||g||_{2,Gamma}
//        + M3 sqrt(2 + 2^{-1/n} sigma_#) ||g||_{p,Gamma}).
inline EllipticConstants elliptic_constants(const MaterialModel& m, const EmbeddingConstants& ec,
                                            const CertificateNorms& nm) {
  cert_detail::require_bounds(m);
  ec.validate();
  EllipticConstants out;
  const double om_exp = std::pow(nm.omega, 0.5 - 1.0 / ec.p);
  out.a_sharp = (ec.m1 * om_exp + ec.m2 * std::sqrt(1.0 + m.sigma_min)) / m.sigma_min;
  out.b_sharp = std::pow(ec.time_horizon, 1.0 / ec.p) / m.sigma_min *
                (ec.m1 * ec.elliptic_trace * nm.g_l2_gamma +
                 ec.m3 * std::sqrt(2.0 + std::pow(2.0, -1.0 / ec.n) * m.sigma_min) *
                     nm.g_lp_gamma);
  return out;
}

// Pointwise majorant of the potential-equation forcing,
// sigma^# alpha^# ||grad theta|| + sum_j D_j^# ||grad c_j||.
inline double elliptic_majorant(const MaterialModel& m, double grad_theta_norm,
                                const std::vector<double>& grad_c_norms) {
  double s = m.sigma_max * m.seebeck_max * grad_theta_norm;
  for (std::size_t j = 0; j < m.species.size(); ++j)
    s += m.species[j].diffusion_max * grad_c_norms[j];
  return s;
}

struct SpeciesConstants {
  double g_envelope = 0.0;  // boundary-data constant from gamma_i
  double x = 0.0;           // multiplies ||grad phi||_2
  double y = 0.0;           // multiplies ||grad phi||_p
  double q = 0.0;           // trace-term constant paired with the Soret group
  double q_sharp = 0.0;     // initial/boundary data weight
  double a0 = 0.0;          // multiplies the temperature radius R
  double a = 0.0;           // multiplies sum_j (D_j')^# R_j
  double data = 0.0;        // radius-free addends of the concentration bound
};

inline SpeciesConstants species_constants(const MaterialModel& m, std::size_t i,
                                          const EmbeddingConstants& ec,
                                          const CertificateNorms& nm,
                                          const EllipticConstants& el) {
  cert_detail::require_bounds(m);
  const auto& sp = m.species[i];
  const double p = ec.p;
  const double n = ec.n;
  const double T = ec.time_horizon;
  const double dmin = sp.diffusion_min;
  const double tse = cert_detail::t_exp_factor(ec);        // 1 + T e^T
  const double tpe = cert_detail::t_exp_p_factor(ec);      // (T e^{(p-1)T})^{1/p}
  const double omega = nm.omega;
  const double qt = omega * T;                             // |Q_T|
  const double qt_exp = std::pow(qt, 0.5 - 1.0 / p);
  const double om_1mp = std::pow(omega, 1.0 - 1.0 / p);
  const double ts_sharp = sp.transference_max * m.sigma_max;
  const double g_sharp = sp.bv_growth;

  SpeciesConstants out;
  out.g_envelope =
      ec.trace_2 * (std::sqrt(tse * (2.0 + dmin) * std::pow(omega, 1.0 / n)) * nm.gamma_i_l2[i] +
                    std::sqrt(1.0 + dmin) * nm.gamma_i_lp[i]);
  out.x = std::sqrt(tse) *
          (ts_sharp + g_sharp * std::sqrt(2.0 + dmin) * std::pow(omega, (1.0 + 1.0 / n) / 2.0) *
                          ec.trace_2 * ec.trace_2 * ec.poincare_2);
  out.y = std::sqrt(1.0 + dmin) *
          (ts_sharp + g_sharp * ec.trace_2 * ec.trace_p * om_1mp * ec.poincare_p);
  out.q = ec.trace_2 * g_sharp *
          (std::sqrt(1.0 + dmin) * ec.trace_p * om_1mp +
           std::sqrt(tse * (2.0 + dmin) * std::pow(omega, 1.0 / n)) * ec.trace_2 * om_1mp *
               std::pow(T, 0.5 - 1.0 / p));
  out.q_sharp = std::pow(std::pow(p * p * std::pow(p - 1.0, p - 2.0) / (2.0 * dmin),
                                  1.0 / (p - 1.0)) +
                             p - 1.0,
                         1.0 / p) *
                std::pow(ec.trace_2, 2.0 / p) * std::pow(omega, 1.0 / (p * n));

  const double sq_pd = std::sqrt((p - 1.0) / dmin);
  const double C_over_d = ec.regularity / dmin;
  out.a0 = tpe * (sq_pd * (sp.soret_max + el.a_sharp * sp.transference_max * m.sigma_max *
                                              m.sigma_max * m.seebeck_max) +
                  g_sharp * out.q_sharp * ec.trace_p * om_1mp *
                      (1.0 + ec.poincare_p * el.a_sharp * m.sigma_max * m.seebeck_max)) +
           C_over_d * (sp.soret_max * z_factor(ec, qt_exp, dmin, 1.0) + out.q +
                       (out.x / m.sigma_min * qt_exp + out.y * el.a_sharp) * m.sigma_max *
                           m.seebeck_max);
  out.a = C_over_d * (out.x / m.sigma_min * qt_exp + out.y * el.a_sharp) +
          el.a_sharp * tpe *
              (sq_pd * ts_sharp + g_sharp * out.q_sharp * ec.trace_p * om_1mp * ec.poincare_p);

  // Radius-free data terms of the concentration bound.
  out.data = tpe * (nm.c0_lp[i] + out.q_sharp * nm.gamma_i_lpp[i] +
                    (sq_pd * ts_sharp + g_sharp * ec.trace_p * om_1mp * ec.poincare_p) *
                        el.b_sharp) +
             C_over_d * (std::sqrt(dmin * tse) * nm.c0_l2[i] + out.g_envelope +
                         out.y * el.b_sharp +
                         out.x / m.sigma_min * std::sqrt(T) * ec.elliptic_trace * nm.g_l2_gamma);
  return out;
}

struct ThermalConstants {
  double b0 = 0.0;       // multiplies the temperature radius R
  double b = 0.0;        // multiplies sum_j (D_j')^# R_j
  double h_sharp = 0.0;  // boundary-data constant of the gradient bound
  double data = 0.0;     // radius-free addends of the temperature bound
};

inline ThermalConstants thermal_constants(const MaterialModel& m, const EmbeddingConstants& ec,
                                          const CertificateNorms& nm,
                                          const EllipticConstants& el) {
  cert_detail::require_bounds(m);
  if (m.radiative_min <= 0.0)
    throw IncompleteModelError("radiative lower bound b_# must be positive");
  const double p = ec.p;
  const double l = ec.ell;
  const double lp = l / (l - 1.0);
  const double T = ec.time_horizon;
  const double rho_cp = m.constants.density * m.constants.heat_capacity;
  const double k = m.k_min;
  const double b_min = m.radiative_min;
  const double tse = cert_detail::t_exp_factor(ec);
  const double qt_exp = std::pow(nm.omega * T, 0.5 - 1.0 / p);
  const double C = ec.regularity;

  ThermalConstants out;
  const double bracket =
      C * std::sqrt(tse) / k + std::pow(tse / (b_min * k), 1.0 / l);
  const double pref0 = m.peltier_max * m.seebeck_max * m.sigma_max * m.sigma_max / m.sigma_min;
  out.b0 = pref0 == 0.0
               ? 0.0
               : pref0 * (C * std::sqrt(1.0 + k / rho_cp) / k * m.sigma_min * el.a_sharp +
                          bracket * qt_exp);
  out.b = C * std::sqrt(1.0 + k / rho_cp) / k *
              (1.0 + m.peltier_max * m.sigma_max * el.a_sharp) +
          bracket * (1.0 + m.peltier_max * m.sigma_max / m.sigma_min) * qt_exp;

  out.h_sharp =
      std::sqrt(1.0 + k / rho_cp) * ec.trace_2 * (nm.gamma_w_lp + nm.gamma_e_lp) +
      std::sqrt(k * tse) *
          (std::sqrt(2.0 * (l - 1.0) / (l * std::pow(b_min, 1.0 / (l - 1.0)))) *
               std::pow(nm.gamma_w_lellp, lp / 2.0) +
           std::sqrt(2.0 + k) * ec.trace_2 * std::pow(nm.omega, 1.0 / (2.0 * ec.n)) *
               nm.gamma_e_l2);

  const double wall_group =
      rho_cp * nm.theta0_l2 * nm.theta0_l2 +
      (nm.gamma_w_lellp > 0.0
           ? 2.0 * (l - 1.0) / (l * std::pow(b_min, 1.0 / (l - 1.0))) *
                 std::pow(nm.gamma_w_lellp, lp)
           : 0.0) +
      (2.0 / k + 1.0 / rho_cp) * ec.trace_2 * ec.trace_2 * std::pow(nm.omega, 1.0 / ec.n) *
          nm.gamma_e_l2 * nm.gamma_e_l2;
  out.data =
      std::pow(tse / b_min, 1.0 / l) *
          (std::pow(wall_group, 1.0 / l) +
           m.peltier_max * m.sigma_max / (std::pow(k, 1.0 / l) * m.sigma_min) *
               std::pow(T, 1.0 - 1.0 / p) * ec.elliptic_trace * nm.g_l2_gamma) +
      C / k *
          (std::sqrt(rho_cp * k * tse) * nm.theta0_l2 + out.h_sharp +
           m.peltier_max * m.sigma_max *
               z_factor(ec, std::sqrt(T) * ec.elliptic_trace * nm.g_l2_gamma / m.sigma_min,
                        k / rho_cp, el.b_sharp));
  return out;
}

// H0(a, b): the p-power data functional of the temperature estimate, as a
// function of ||grad phi||_{p,Q_T} and the vector ||grad c_j||_{p,Q_T}.
inline double thermal_h0(const MaterialModel& m, const EmbeddingConstants& ec,
                         const CertificateNorms& nm, double a, const std::vector<double>& b) {
  const double p = ec.p;
  const double l = ec.ell;
  const double rho_cp = m.constants.density * m.constants.heat_capacity;
  const double k = m.k_min;
  double coupling = m.sigma_max * m.peltier_max * a;
  for (std::size_t j = 0; j < m.species.size(); ++j)
    coupling += m.species[j].dufour_max * (j < b.size() ? b[j] : 0.0);
  double out = std::pow(nm.theta0_lp, p) +
               std::pow(rho_cp, -p / 2.0) * std::pow((p - 1.0) / k, p / 2.0) *
                   std::pow(coupling, p);
  if (nm.gamma_w_pow > 0.0)
    out += 1.0 / rho_cp * p * (l - 1.0) /
           ((l + p - 2.0) * std::pow(m.radiative_min, (p - 1.0) / (l - 1.0))) * nm.gamma_w_pow;
  const double pp = p / (p - 1.0);
  out += std::pow(rho_cp, -pp) *
         (std::pow(p * p * std::pow(p - 1.0, p - 2.0) / (2.0 * k / rho_cp), 1.0 / (p - 1.0)) +
          p - 1.0) *
         std::pow(ec.trace_2, 2.0 / (p - 1.0)) *
         std::pow(nm.omega, 1.0 / ((p - 1.0) * ec.n)) * std::pow(nm.gamma_e_lpp, pp);
  return out;
}

// Data norms for the standalone parabolic a priori bounds.
struct ParabolicData {
  double u0 = 0.0;          // ||u_0||_{p,Omega}
  double f_vol = 0.0;       // ||f||_{p,Q_T} (vector volume source)
  double f_bnd = 0.0;       // ||f||_{p,Gamma x ]0,T[}
  double f_bnd_conj = 0.0;  // ||f||_{p',Gamma x ]0,T[}
  double h_pow = 0.0;       // \int_{Sigma_T} |H|^{(l+p-2)/(l-1)}
  double h_bnd = 0.0;       // ||H||_{p,Sigma_T}
  double h_bnd_conj = 0.0;  // ||H||_{p',Sigma_T}
};

struct AprioriBounds {
  double h_value = 0.0;         // data functional H(k_#, b_#, p)
  double sup_bound = 0.0;       // bound on ess sup ||u||_{p,Omega}^p
  double boundary_bound = 0.0;  // bound on ||u||^{l+p-2}_{l+p-2,Sigma_T}
  double gradient_bound = 0.0;  // bound on ||grad u||_{p,Q_T}
};

inline AprioriBounds a_priori_bounds(const EmbeddingConstants& ec, double k_min, double b_min,
                                     double p, double omega, const ParabolicData& data_p,
                                     const ParabolicData& data_2) {
  AprioriBounds out;
  const double T = ec.time_horizon;
  auto h_full = [&](double q, const ParabolicData& d) {
    const double qq = q / (q - 1.0);
    double v = std::pow(d.u0, q) + std::pow((q - 1.0) / k_min, q / 2.0) * std::pow(d.f_vol, q);
    if (b_min > 0.0) {
      if (d.h_pow > 0.0)
        v += q * (ec.ell - 1.0) /
             ((ec.ell + q - 2.0) * std::pow(b_min, (q - 1.0) / (ec.ell - 1.0))) * d.h_pow;
      if (d.f_bnd_conj > 0.0)
        v += (q - 1.0) *
             (std::pow(q * q / (2.0 * k_min * (q - 1.0)), 1.0 / (q - 1.0)) + 1.0) *
             std::pow(ec.trace_2, 2.0 / (q - 1.0)) *
             std::pow(omega, 1.0 / ((q - 1.0) * ec.n)) * std::pow(d.f_bnd_conj, qq);
    } else {
      if (d.h_bnd_conj > 0.0)
        v += (q - 1.0) *
             (std::pow(q * q / (2.0 * k_min * (q - 1.0)), 1.0 / (q - 1.0)) + 1.0) *
             std::pow(ec.trace_2, 2.0 / (q - 1.0)) *
             std::pow(omega, 1.0 / ((q - 1.0) * ec.n)) * std::pow(d.h_bnd_conj, qq);
    }
    return v;
  };
  out.h_value = h_full(p, data_p);
  out.sup_bound = out.h_value * std::exp((p - 1.0) * T);
  out.boundary_bound = b_min > 0.0 ? out.h_value * (1.0 + (p - 1.0) * T * std::exp((p - 1.0) * T)) / b_min
                                   : 0.0;
  const double h2 = h_full(2.0, data_2);
  out.gradient_bound =
      ec.regularity / k_min *
      (std::sqrt(k_min * h2 * (1.0 + T * std::exp(T))) +
       std::sqrt(1.0 + k_min) *
           (data_p.f_vol + ec.trace_2 * (data_p.f_bnd + data_p.h_bnd)));
  return out;
}

struct SpeciesCertificate {
  std::string name;
  SpeciesConstants constants;
  std::optional<double> b_i;  // undefined when the primary condition fails
  double slope = 0.0;         // slope of the affine radius function
  bool condition = false;     // slope > 0
  double margin = 0.0;        // 1 - the condition value
  double radius = 0.0;        // R_i
  double p0 = 0.0;            // constant term of the radius function
  double residual = 0.0;      // |P_i(R_i)| / max(1, |P_i(0)|)
};

struct CertificateReport {
  EllipticConstants elliptic;
  ThermalConstants thermal;
  std::vector<SpeciesCertificate> species;
  double b0 = 0.0;
  bool condition_b0 = false;  // primary smallness condition b0 < 1
  double b0_margin = 0.0;     // 1 - b0
  bool certified = false;
  std::string failure_reason;
  double radius_theta = 0.0;  // R
  double p0_constant = 0.0;   // radius-free data constant C
  double p_of_r = 0.0;        // residual of the temperature radius equation
};

// Evaluates the explicit constants, checks the smallness conditions
// (b0 < 1, the first species condition b1 (D_1')^# < 1, and the recurrence
// conditions for i >= 2), and computes the radii as the positive roots of the
// affine functions when all conditions hold.
inline CertificateReport check_smallness(const MaterialModel& model,
                                         const EmbeddingConstants& ec,
                                         const CertificateNorms& nm) {
  ec.validate();
  CertificateReport rep;
  rep.elliptic = elliptic_constants(model, ec, nm);
  rep.thermal = thermal_constants(model, ec, nm, rep.elliptic);
  rep.b0 = rep.thermal.b0;
  rep.condition_b0 = rep.b0 < 1.0;
  rep.b0_margin = 1.0 - rep.b0;

  const std::size_t I = model.species.size();
  rep.species.resize(I);
  for (std::size_t i = 0; i < I; ++i) {
    rep.species[i].name = model.species[i].name;
    rep.species[i].constants = species_constants(model, i, ec, nm, rep.elliptic);
  }

  if (!rep.condition_b0) {
    rep.certified = false;
    rep.failure_reason = "primary smallness condition failed: b0 >= 1";
    return rep;
  }

  // b_i = a_i^0 b / (1 - b0) + a_i, then the recurrence slopes
  // s_1 = 1 - b_1 d_1, s_i = 1 - b_i d_i (1 - sum_{j<i} b_j / s_j).
  bool all_ok = true;
  double partial = 0.0;  // sum_{j<i} b_j / s_j
  for (std::size_t i = 0; i < I; ++i) {
    auto& sc = rep.species[i];
    const double bi =
        sc.constants.a0 * rep.thermal.b / (1.0 - rep.b0) + sc.constants.a;
    sc.b_i = bi;
    const double di = model.species[i].dufour_max;
    const double value = i == 0 ? bi * di : bi * di * (1.0 - partial);
    sc.slope = 1.0 - value;
    sc.condition = sc.slope > 0.0;
    sc.margin = sc.slope;
    if (!sc.condition) {
      all_ok = false;
      if (rep.failure_reason.empty())
        rep.failure_reason = i == 0
                                 ? "species smallness condition failed: b1 (D_1')^# >= 1"
                                 : "recurrence condition failed for species " + sc.name;
    }
    if (sc.condition) partial += bi / sc.slope;
    else break;
  }

  if (!all_ok) {
    rep.certified = false;
    return rep;
  }

  // Radii in recurrence order: R_i = P_i(0)/slope_i with
  // P_i(0) = a_i^0 C/(1-b0) + (radius-free concentration data terms).
  double dufour_radius_sum = 0.0;
  for (std::size_t i = 0; i < I; ++i) {
    auto& sc = rep.species[i];
    sc.p0 = sc.constants.a0 * rep.thermal.data / (1.0 - rep.b0) + sc.constants.data;
    sc.radius = sc.p0 / sc.slope;
    sc.residual = std::abs(sc.slope * sc.radius - sc.p0) / std::max(1.0, std::abs(sc.p0));
    dufour_radius_sum += model.species[i].dufour_max * sc.radius;
  }
  rep.p0_constant = rep.thermal.data;
  const double p0_full = rep.thermal.data + rep.thermal.b * dufour_radius_sum;
  rep.radius_theta = p0_full / (1.0 - rep.b0);
  rep.p_of_r = std::abs((1.0 - rep.b0) * rep.radius_theta - p0_full) /
               std::max(1.0, std::abs(p0_full));
  rep.certified = true;
  return rep;
}

}  // namespace tec
