#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "tec/core.hpp"
#include "tec/fem.hpp"
#include "tec/linear.hpp"
#include "tec/materials.hpp"

namespace tec {

// Wall radiation flux h_R(x,theta)|theta|^{l-2} theta - gamma(x, theta).
// l = 5 with h_R = sigma_SB*eps and gamma = sigma_SB*eps*theta_w^4 is the
// Stefan-Boltzmann law with Kirchhoff absorptivity.
inline double radiation_boundary_flux(const MaterialModel& m, double x, double theta) {
  const double th = m.clamp_theta(theta);
  const double hr = eval_law(m.radiative, x, th, 0.0);
  const double gamma = eval_law(m.wall_source, x, th, 0.0);
  const double l = m.radiation_exponent;
  return hr * std::pow(std::abs(theta), l - 2.0) * theta - gamma;
}

// Electrode cooling flux h_C(x,theta)(theta - theta_e).
inline double newton_cooling_flux(const MaterialModel& m, double x, double theta,
                                  BoundaryTag electrode) {
  const double th = m.clamp_theta(theta);
  const double hc = eval_law(m.cooling, x, th, 0.0);
  const double theta_e = electrode == BoundaryTag::anode ? m.theta_anode : m.theta_cathode;
  return hc * (theta - theta_e);
}

struct TemperatureStepSettings {
  double lin_tol = 1e-12;
  double newton_tol = 1e-10;  // relative nonlinear residual
  int max_newton = 50;
};

// One implicit Euler step of the heat balance:
//   rho c_p (T^{n+1}-T^n)/dt v + \int K(theta^n) grad T^{n+1}.grad v
//   + \int_{Gamma_w} h_R(theta^n) |T^{n+1}|^{l-2} T^{n+1} v
//   + \int_Gamma h_C(theta^n) T^{n+1} v
//   = \int_Gamma h_C theta_e v + \int_{Gamma_w} gamma(theta^n) v
//     - \int (R theta^2 sum_j D_j' grad c_j + Pi sigma grad phi).grad v
//     + \int f_extra v.
// Coefficient arguments are lagged at theta^n; the l-power radiation term is
// kept exact and solved by damped Newton. `extra_source` is a verification
// hook for manufactured volumetric heating [W/m^3].
inline Vector step_temperature(const Mesh& mesh, const MaterialModel& model,
                               const Vector& theta_old,
                               const std::vector<Vector>& concentrations, const Vector& phi,
                               double dt, const TemperatureStepSettings& settings = {},
                               const std::function<double(int)>& extra_source = {}) {
  if (!(dt > 0.0)) throw DomainError("step_temperature: dt must be positive");
  if (!theta_old.allFinite() || !phi.allFinite())
    throw DivergenceError("step_temperature: non-finite field values");

  const int nn = mesh.num_nodes();
  const double rho_cp = model.constants.density * model.constants.heat_capacity;
  const double R = model.constants.gas_constant;
  const double l = model.radiation_exponent;
  const Vector mass = lumped_mass(mesh);

  std::vector<double> cmean(model.species.size(), 0.0);
  std::vector<CoefficientSet> co(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry g = cell_geometry(mesh, c);
    for (std::size_t j = 0; j < model.species.size(); ++j)
      cmean[j] = cell_mean(mesh, g, c, concentrations[j]);
    co[c] = evaluate_coefficients(model, g.centroid[0], cell_mean(mesh, g, c, theta_old), cmean);
  }

  std::vector<Triplet> trip;
  trip.reserve(9 * mesh.num_cells() + 3 * nn);
  add_stiffness(mesh, [&](int c) { return co[c].conductivity; }, trip);
  for (int k = 0; k < nn; ++k) trip.emplace_back(k, k, rho_cp * mass[k] / dt);

  // Lumped electrode cooling h_C(theta^n) and its theta_e source.
  Vector b = Vector::Zero(nn);
  for (int k = 0; k < nn; ++k) b[k] = rho_cp * mass[k] / dt * theta_old[k];
  for (const auto& f : mesh.boundary_faces) {
    if (f.tag != BoundaryTag::anode && f.tag != BoundaryTag::cathode) continue;
    const double theta_e = f.tag == BoundaryTag::anode ? model.theta_anode : model.theta_cathode;
    const double w = f.area / mesh.nodes_per_face();
    for (int k = 0; k < mesh.nodes_per_face(); ++k) {
      const int nd = f.nodes[k];
      if (nd < 0) continue;
      const double x = mesh.nodes[nd][0];
      const double hc = eval_law(model.cooling, x, model.clamp_theta(theta_old[nd]), 0.0);
      trip.emplace_back(nd, nd, w * hc);
      b[nd] += w * hc * theta_e;
    }
  }

  // Wall radiation: nodal weights and lagged h_R, gamma.
  Vector rad_weight = Vector::Zero(nn);
  Vector rad_hr = Vector::Zero(nn);
  for (const auto& f : mesh.boundary_faces) {
    if (f.tag != BoundaryTag::wall) continue;
    const double w = f.area / mesh.nodes_per_face();
    for (int k = 0; k < mesh.nodes_per_face(); ++k) {
      const int nd = f.nodes[k];
      if (nd < 0) continue;
      const double x = mesh.nodes[nd][0];
      const double thn = model.clamp_theta(theta_old[nd]);
      rad_weight[nd] += w;
      rad_hr[nd] = eval_law(model.radiative, x, thn, 0.0);
      b[nd] += w * eval_law(model.wall_source, x, thn, 0.0);
    }
  }

  // Dufour and Peltier volumetric couplings, lagged.
  Vector drift = Vector::Zero(nn);
  add_gradient_source(mesh, [&](int c) {
    const CellGeometry g = cell_geometry(mesh, c);
    const double thn = cell_mean(mesh, g, c, theta_old);
    Vec2 G = co[c].peltier * co[c].sigma * cell_gradient(mesh, g, c, phi);
    for (std::size_t j = 0; j < model.species.size(); ++j)
      G = G + R * thn * thn * co[c].species[j].dufour *
                  cell_gradient(mesh, g, c, concentrations[j]);
    return G;
  }, drift);
  b -= drift;

  if (extra_source)
    for (int k = 0; k < nn; ++k) b[k] += mass[k] * extra_source(k);

  SpMat A(nn, nn);
  A.setFromTriplets(trip.begin(), trip.end());

  // F(T) = A T + N(T) - b with the diagonal monotone radiation operator
  // N_k(T) = w_k h_R |T_k|^{l-2} T_k.
  auto nonlinear = [&](const Vector& T) {
    Vector N = Vector::Zero(nn);
    for (int k = 0; k < nn; ++k)
      if (rad_weight[k] > 0.0)
        N[k] = rad_weight[k] * rad_hr[k] * std::pow(std::abs(T[k]), l - 2.0) * T[k];
    return N;
  };
  auto residual = [&](const Vector& T) { return Vector(A * T + nonlinear(T) - b); };

  Vector T = theta_old;
  const double scale = std::max(b.norm(), 1.0);
  Vector res = residual(T);
  for (int it = 0; it < settings.max_newton; ++it) {
    if (res.norm() <= settings.newton_tol * scale) return T;
    SpMat J = A;
    std::vector<Triplet> jt;
    for (int k = 0; k < nn; ++k)
      if (rad_weight[k] > 0.0)
        jt.emplace_back(k, k, rad_weight[k] * rad_hr[k] * (l - 1.0) *
                                   std::pow(std::abs(T[k]), l - 2.0));
    SpMat Jr(nn, nn);
    Jr.setFromTriplets(jt.begin(), jt.end());
    J += Jr;
    const Vector dT = solve_spd(J, Vector(-res), settings.lin_tol);
    // Halve the update while it overshoots the residual.
    double lambda = 1.0;
    for (int halv = 0; halv < 40; ++halv) {
      Vector Tc = T + lambda * dT;
      Vector rc = residual(Tc);
      if (rc.norm() < res.norm() || lambda < 1e-12) {
        T = Tc;
        res = rc;
        break;
      }
      lambda *= 0.5;
    }
  }
  if (res.norm() > settings.newton_tol * scale)
    throw DivergenceError("step_temperature: radiation Newton iteration did not converge");
  return T;
}

}  // namespace tec
