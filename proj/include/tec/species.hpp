#pragma once

#include <cmath>
#include <vector>

#include "tec/core.hpp"
#include "tec/fem.hpp"
#include "tec/linear.hpp"
#include "tec/materials.hpp"

namespace tec {

// Truncated Butler-Volmer current [A/m^2]: with eta = phi - phi_eq and
// a = s_l F eta / (R theta) clamped to [-cap, cap], returns
// J_l (exp(beta a) - exp(-(1-beta) a)). The truncation yields the linear
// growth bound required of the boundary operator.
inline double butler_volmer_flux(const ButlerVolmerElectrode& bv, double cap, double theta,
                                 double phi, const PhysicalConstants& pc) {
  if (!(theta > 0.0)) throw DomainError("butler_volmer_flux: theta must be positive");
  if (!bv.enabled) return 0.0;
  const double eta = phi - bv.eq_potential;
  double a = bv.electrons * pc.faraday * eta / (pc.gas_constant * theta);
  a = std::clamp(a, -cap, cap);
  return bv.exchange_current * (std::exp(bv.beta * a) - std::exp(-(1.0 - bv.beta) * a));
}

struct SpeciesStepSettings {
  double lin_tol = 1e-12;
};

// One implicit Euler step of the concentration equation for species i:
//   (c^{n+1} - c^n)/dt tested with v  +  \int D_i(theta) grad c^{n+1}.grad v
//     = \int_Gamma (g_i/(F z_i)) v
//       - \int (c^n S_i grad theta + (t_i/(F z_i)) sigma grad phi).grad v,
// no flux on wall and outer. The couplings are lagged at the supplied
// (theta, phi) iterate; theta also feeds D_i, S_i and the electrode kinetics.
inline Vector step_concentration(const Mesh& mesh, const MaterialModel& model, std::size_t i,
                                 const Vector& c_old, const Vector& theta, const Vector& phi,
                                 double dt, const SpeciesStepSettings& settings = {}) {
  if (!(dt > 0.0)) throw DomainError("step_concentration: dt must be positive");
  if (!c_old.allFinite() || !theta.allFinite() || !phi.allFinite())
    throw DivergenceError("step_concentration: non-finite field values");
  if (i >= model.species.size()) throw DomainError("step_concentration: no such species");
  const auto& sp = model.species[i];
  const double F = model.constants.faraday;
  const double Fz = F * sp.valence;

  const int nn = mesh.num_nodes();
  const Vector mass = lumped_mass(mesh);

  std::vector<Triplet> trip;
  trip.reserve(9 * mesh.num_cells() + nn);
  std::vector<double> cmean(model.species.size(), 0.0);
  std::vector<CoefficientSet> co(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry g = cell_geometry(mesh, c);
    cmean[i] = cell_mean(mesh, g, c, c_old);
    co[c] = evaluate_coefficients(model, g.centroid[0], cell_mean(mesh, g, c, theta), cmean);
  }
  add_stiffness(mesh, [&](int c) {
    const double d = co[c].species[i].diffusion;
    return std::array<double, 3>{d, 0.0, d};
  }, trip);
  for (int k = 0; k < nn; ++k) trip.emplace_back(k, k, mass[k] / dt);
  SpMat A(nn, nn);
  A.setFromTriplets(trip.begin(), trip.end());

  Vector b = Vector::Zero(nn);
  for (int k = 0; k < nn; ++k) b[k] = mass[k] / dt * c_old[k];

  // Lagged Soret and migration terms, -(c^n S_i grad theta + t_i/(Fz) sigma grad phi).grad v.
  Vector drift = Vector::Zero(nn);
  add_gradient_source(mesh, [&](int c) {
    const CellGeometry g = cell_geometry(mesh, c);
    const double cn = cell_mean(mesh, g, c, c_old);
    const Vec2 gt = cell_gradient(mesh, g, c, theta);
    const Vec2 gp = cell_gradient(mesh, g, c, phi);
    return cn * co[c].species[i].soret * gt +
           (co[c].species[i].transference / Fz) * co[c].sigma * gp;
  }, drift);
  b -= drift;

  // Electrode kinetics: molar flux g_i/(F z_i) on anode/cathode faces, lumped.
  for (const auto& f : mesh.boundary_faces) {
    const ButlerVolmerElectrode* bv = nullptr;
    if (f.tag == BoundaryTag::anode && sp.bv_anode.enabled) bv = &sp.bv_anode;
    if (f.tag == BoundaryTag::cathode && sp.bv_cathode.enabled) bv = &sp.bv_cathode;
    if (!bv) continue;
    const double w = f.area / mesh.nodes_per_face();
    for (int k = 0; k < mesh.nodes_per_face(); ++k) {
      const int nd = f.nodes[k];
      if (nd < 0) continue;
      const double cur = butler_volmer_flux(*bv, sp.bv_cap, theta[nd], phi[nd], model.constants);
      b[nd] += w * cur / Fz;
    }
  }

  return solve_spd(A, b, settings.lin_tol);
}

}  // namespace tec
