#pragma once

#include <vector>

#include "tec/core.hpp"
#include "tec/materials.hpp"

namespace tec {

struct FluxSet {
  Vec2 heat{0.0, 0.0};             // q [W/m^2]
  std::vector<Vec2> ionic;         // J_i [mol/(m^2 s)]
  Vec2 current{0.0, 0.0};          // j [A/m^2]
};

inline Vec2 apply_conductivity(const std::array<double, 3>& k, Vec2 g) {
  return {k[0] * g[0] + k[1] * g[1], k[1] * g[0] + k[2] * g[1]};
}

// q = -K grad(theta) - R theta^2 sum_i D_i' grad(c_i) - Pi sigma grad(phi)
inline Vec2 heat_flux(const CoefficientSet& co, const PhysicalConstants& pc, Vec2 grad_theta,
                      const std::vector<Vec2>& grad_c, Vec2 grad_phi, double theta) {
  Vec2 q = -1.0 * apply_conductivity(co.conductivity, grad_theta);
  for (std::size_t i = 0; i < co.species.size(); ++i)
    q = q - pc.gas_constant * theta * theta * co.species[i].dufour * grad_c[i];
  return q - co.peltier * co.sigma * grad_phi;
}

// J_i = -c_i S_i grad(theta) - D_i grad(c_i) - u_i c_i grad(phi)
inline Vec2 ionic_flux(const CoefficientSet& co, const PhysicalConstants& pc, std::size_t i,
                       double c, Vec2 grad_theta, Vec2 grad_c, Vec2 grad_phi, double theta) {
  const auto& sp = co.species[i];
  const double u = sp.valence * sp.diffusion * pc.faraday / (pc.gas_constant * theta);
  return -1.0 * (c * sp.soret * grad_theta) - sp.diffusion * grad_c - u * c * grad_phi;
}

// j = -alpha sigma grad(theta) - F sum_i z_i D_i grad(c_i) - sigma grad(phi)
inline Vec2 current_density(const CoefficientSet& co, const PhysicalConstants& pc,
                            Vec2 grad_theta, const std::vector<Vec2>& grad_c, Vec2 grad_phi) {
  Vec2 j = -co.seebeck * co.sigma * grad_theta;
  for (std::size_t i = 0; i < co.species.size(); ++i)
    j = j - pc.faraday * co.species[i].valence * co.species[i].diffusion * grad_c[i];
  return j - co.sigma * grad_phi;
}

inline FluxSet evaluate_fluxes(const CoefficientSet& co, const PhysicalConstants& pc,
                               double theta, const std::vector<double>& c, Vec2 grad_theta,
                               const std::vector<Vec2>& grad_c, Vec2 grad_phi) {
  FluxSet f;
  f.heat = heat_flux(co, pc, grad_theta, grad_c, grad_phi, theta);
  f.ionic.resize(co.species.size());
  for (std::size_t i = 0; i < co.species.size(); ++i)
    f.ionic[i] = ionic_flux(co, pc, i, c[i], grad_theta, grad_c[i], grad_phi, theta);
  f.current = current_density(co, pc, grad_theta, grad_c, grad_phi);
  return f;
}

}  // namespace tec
