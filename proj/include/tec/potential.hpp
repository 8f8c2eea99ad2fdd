#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "tec/core.hpp"
#include "tec/fem.hpp"
#include "tec/linear.hpp"
#include "tec/materials.hpp"

namespace tec {

struct PotentialSettings {
  double compat_tol = 1e-8;     // relative tolerance on \int_Gamma g ds
  double lin_tol = 1e-12;       // linear solver tolerance (iterative path)
  double trace_constant = 1.0;  // K used by the energy-estimate diagnostic
};

struct PotentialSolution {
  Vector phi;
  double boundary_mean = 0.0;         // after normalization
  double residual = 0.0;              // relative linear residual
  double compatibility_defect = 0.0;  // \int_Gamma g ds [A]
  // Energy-estimate diagnostic: sigma_# ||grad phi||_2 vs the data majorant.
  double energy_lhs = 0.0;
  double energy_rhs = 0.0;
};

namespace detail {

// Pure Neumann problem is singular (constants); pin one node, solve, then
// shift to the zero-boundary-mean gauge.
inline Vector solve_pinned_and_center(const Mesh& mesh, const SpMat& A, Vector b, double lin_tol,
                                      double* residual_out) {
  SpMat Ap = A;
  const int pin = 0;
  for (int k = 0; k < Ap.outerSize(); ++k)
    for (SpMat::InnerIterator it(Ap, k); it; ++it)
      if (it.row() == pin || it.col() == pin) it.valueRef() = (it.row() == it.col()) ? 1.0 : 0.0;
  Ap.prune(0.0);
  b[pin] = 0.0;
  Vector phi = solve_spd(Ap, b, lin_tol, residual_out);
  const double mean = boundary_integral(mesh, phi) / total_boundary_measure(mesh);
  phi.array() -= mean;
  return phi;
}

}  // namespace detail

// Generic scalar Neumann solve: \int sigma grad(u).grad(v) =
// \int f v + \int_{dOmega} gbar v - \int G.grad(v), normalized to zero
// boundary mean. Used by the potential solve and by verification cases with
// manufactured sources.
inline PotentialSolution solve_neumann(const Mesh& mesh,
                                       const std::function<double(int)>& sigma_cell,
                                       const std::function<double(int)>& volume_source_node,
                                       const std::function<double(const BoundaryFace&, int)>& boundary_flux,
                                       const std::function<Vec2(int)>& gradient_source,
                                       double lin_tol = 1e-12) {
  std::vector<Triplet> trip;
  add_stiffness(mesh, [&](int c) {
    const double s = sigma_cell(c);
    return std::array<double, 3>{s, 0.0, s};
  }, trip);
  SpMat A(mesh.num_nodes(), mesh.num_nodes());
  A.setFromTriplets(trip.begin(), trip.end());

  Vector b = Vector::Zero(mesh.num_nodes());
  const Vector mass = lumped_mass(mesh);
  for (int i = 0; i < mesh.num_nodes(); ++i) b[i] += mass[i] * volume_source_node(i);
  for (const auto& f : mesh.boundary_faces) {
    const double w = f.area / mesh.nodes_per_face();
    for (int k = 0; k < mesh.nodes_per_face(); ++k)
      if (f.nodes[k] >= 0) b[f.nodes[k]] += w * boundary_flux(f, f.nodes[k]);
  }
  Vector minus_grad = Vector::Zero(mesh.num_nodes());
  add_gradient_source(mesh, gradient_source, minus_grad);
  b -= minus_grad;

  PotentialSolution out;
  out.compatibility_defect = b.sum();
  out.phi = detail::solve_pinned_and_center(mesh, A, b, lin_tol, &out.residual);
  out.boundary_mean = boundary_integral(mesh, out.phi) / total_boundary_measure(mesh);
  return out;
}

// Elliptic charge problem at frozen (theta, c): find phi with
// \int sigma(theta) grad(phi).grad(v) = \int_Gamma g v
//   - \int (alpha sigma grad(theta) + F sum_i z_i D_i grad(c_i)).grad(v).
inline PotentialSolution solve_potential(const Mesh& mesh, const MaterialModel& model,
                                         const Vector& theta,
                                         const std::vector<Vector>& concentrations,
                                         const PotentialSettings& settings = {}) {
  const double g_total =
      model.g_anode * boundary_measure(mesh, BoundaryTag::anode) +
      model.g_cathode * boundary_measure(mesh, BoundaryTag::cathode);
  const double g_scale =
      std::abs(model.g_anode) * boundary_measure(mesh, BoundaryTag::anode) +
      std::abs(model.g_cathode) * boundary_measure(mesh, BoundaryTag::cathode);
  if (g_scale > 0.0 && std::abs(g_total) > settings.compat_tol * g_scale)
    throw IncompatibleDataError("surface current is not compatible: int_Gamma g ds != 0");

  const int nc = mesh.num_cells();
  std::vector<CoefficientSet> co(nc);
  std::vector<double> cmean(model.species.size());
  for (int c = 0; c < nc; ++c) {
    const CellGeometry g = cell_geometry(mesh, c);
    for (std::size_t i = 0; i < model.species.size(); ++i)
      cmean[i] = cell_mean(mesh, g, c, concentrations[i]);
    co[c] = evaluate_coefficients(model, g.centroid[0], cell_mean(mesh, g, c, theta), cmean);
  }

  auto sigma_cell = [&](int c) { return co[c].sigma; };
  auto volume_source = [](int) { return 0.0; };
  auto boundary_flux = [&](const BoundaryFace& f, int) {
    if (f.tag == BoundaryTag::anode) return model.g_anode;
    if (f.tag == BoundaryTag::cathode) return model.g_cathode;
    return 0.0;
  };
  const double F = model.constants.faraday;
  auto grad_source = [&](int c) {
    const CellGeometry g = cell_geometry(mesh, c);
    Vec2 G = co[c].seebeck * co[c].sigma * cell_gradient(mesh, g, c, theta);
    for (std::size_t i = 0; i < model.species.size(); ++i)
      G = G + F * co[c].species[i].valence * co[c].species[i].diffusion *
                  cell_gradient(mesh, g, c, concentrations[i]);
    return G;
  };

  PotentialSolution out =
      solve_neumann(mesh, sigma_cell, volume_source, boundary_flux, grad_source, settings.lin_tol);

  // Diagnostic: sigma_# ||grad phi||_2 <= K ||g||_{2,Gamma}
  //   + sigma^# alpha^# ||grad theta||_2 + sum_j D_j^# ||grad c_j||_2.
  out.energy_lhs = model.sigma_min * gradient_lp_norm(mesh, out.phi, 2.0);
  const double ga = boundary_measure(mesh, BoundaryTag::anode);
  const double gc = boundary_measure(mesh, BoundaryTag::cathode);
  const double g_l2 =
      std::sqrt(model.g_anode * model.g_anode * ga + model.g_cathode * model.g_cathode * gc);
  out.energy_rhs = settings.trace_constant * g_l2 +
                   model.sigma_max * model.seebeck_max * gradient_lp_norm(mesh, theta, 2.0);
  for (std::size_t i = 0; i < model.species.size(); ++i)
    out.energy_rhs +=
        model.species[i].diffusion_max * gradient_lp_norm(mesh, concentrations[i], 2.0);
  return out;
}

}  // namespace tec
