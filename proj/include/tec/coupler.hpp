#pragma once

#include <string>
#include <vector>

#include "tec/core.hpp"
#include "tec/fem.hpp"
#include "tec/materials.hpp"
#include "tec/potential.hpp"
#include "tec/species.hpp"
#include "tec/temperature.hpp"

namespace tec {

struct FieldState {
  double time = 0.0;
  Vector theta;
  std::vector<Vector> concentrations;
  Vector phi;
  // Diagnostics.
  int negative_nodes = 0;  // concentration nodes below zero
  long clamp_events = 0;   // admissible-interval clamps seen so far
};

struct PicardSettings {
  double tol = 1e-8;
  int max_iters = 50;
  double relaxation = 0.7;  // omega in (0, 1]
  PotentialSettings potential;
  SpeciesStepSettings species;
  TemperatureStepSettings temperature;
};

inline FieldState initial_state(const Mesh& mesh, const MaterialModel& model) {
  FieldState s;
  s.time = 0.0;
  const int nn = mesh.num_nodes();
  s.theta = Vector::Zero(nn);
  for (int k = 0; k < nn; ++k)
    s.theta[k] = eval_law(model.initial_temperature, mesh.nodes[k][0], 0.0, 0.0);
  s.concentrations.resize(model.species.size());
  for (std::size_t i = 0; i < model.species.size(); ++i) {
    s.concentrations[i] = Vector::Zero(nn);
    for (int k = 0; k < nn; ++k)
      s.concentrations[i][k] = eval_law(model.species[i].initial, mesh.nodes[k][0], 0.0, 0.0);
  }
  s.phi = solve_potential(mesh, model, s.theta, s.concentrations).phi;
  return s;
}

namespace detail {

struct ResidualScales {
  double theta = 1.0;
  std::vector<double> c;
  double phi = 1.0;  // 1 V
};

inline ResidualScales residual_scales(const Mesh& mesh, const FieldState& init) {
  ResidualScales s;
  const Vector mass = lumped_mass(mesh);
  const double vol = mass.sum();
  s.theta = std::max(1e-30, std::abs(mass.dot(init.theta)) / vol);
  s.c.resize(init.concentrations.size());
  for (std::size_t i = 0; i < init.concentrations.size(); ++i)
    s.c[i] = std::max(1e-30, std::abs(mass.dot(init.concentrations[i])) / vol);
  return s;
}

inline double rel_change(const Mesh& mesh, const Vector& mass, const Vector& a, const Vector& b,
                         double scale) {
  double s = 0.0;
  for (int k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += mass[k] * d * d;
  }
  return std::sqrt(s / mass.sum()) / scale;
}

}  // namespace detail

// One application of the decoupled solve map with relaxation: potential at
// the candidate (theta, c), then concentrations with the fresh phi, then
// temperature with the fresh (c, phi). Returns the relaxed candidate and the
// maximal relative L2 change over the three fields.
inline std::pair<FieldState, double> picard_step(const Mesh& mesh, const MaterialModel& model,
                                                 const FieldState& state_n,
                                                 const FieldState& candidate, double dt,
                                                 const PicardSettings& settings) {
  const Vector mass = lumped_mass(mesh);
  const detail::ResidualScales scales = detail::residual_scales(mesh, state_n);
  const double omega = settings.relaxation;

  FieldState next = candidate;
  const PotentialSolution ps =
      solve_potential(mesh, model, candidate.theta, candidate.concentrations, settings.potential);
  next.phi = omega * ps.phi + (1.0 - omega) * candidate.phi;

  std::vector<Vector> fresh_c(model.species.size());
  for (std::size_t i = 0; i < model.species.size(); ++i) {
    fresh_c[i] = step_concentration(mesh, model, i, state_n.concentrations[i], candidate.theta,
                                    next.phi, dt, settings.species);
    next.concentrations[i] = omega * fresh_c[i] + (1.0 - omega) * candidate.concentrations[i];
  }

  const Vector fresh_theta = step_temperature(mesh, model, state_n.theta, next.concentrations,
                                              next.phi, dt, settings.temperature);
  next.theta = omega * fresh_theta + (1.0 - omega) * candidate.theta;

  double res = detail::rel_change(mesh, mass, next.theta, candidate.theta, scales.theta);
  for (std::size_t i = 0; i < model.species.size(); ++i)
    res = std::max(res, detail::rel_change(mesh, mass, next.concentrations[i],
                                           candidate.concentrations[i], scales.c[i]));
  res = std::max(res, detail::rel_change(mesh, mass, next.phi, candidate.phi, scales.phi));
  return {next, res};
}

struct StepResult {
  FieldState state;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;
  bool converged = false;
};

inline StepResult advance_step(const Mesh& mesh, const MaterialModel& model,
                               const FieldState& state_n, double dt,
                               const PicardSettings& settings) {
  StepResult out;
  FieldState candidate = state_n;
  for (int it = 1; it <= settings.max_iters; ++it) {
    auto [next, res] = picard_step(mesh, model, state_n, candidate, dt, settings);
    candidate = std::move(next);
    out.iterations = it;
    out.residual = res;
    out.residual_history.push_back(res);
    if (res <= settings.tol) {
      out.converged = true;
      break;
    }
  }
  candidate.time = state_n.time + dt;
  candidate.negative_nodes = 0;
  for (const auto& c : candidate.concentrations)
    for (int k = 0; k < c.size(); ++k)
      if (c[k] < 0.0) ++candidate.negative_nodes;
  candidate.clamp_events = model.diagnostics->clamp_events.load(std::memory_order_relaxed);
  out.state = std::move(candidate);
  return out;
}

struct Trajectory {
  std::vector<FieldState> states;
  std::vector<int> picard_iterations;  // per advanced step; 0 for the initial state
  std::vector<double> residuals;
  bool completed = true;
  int failed_step = -1;
  double last_residual = 0.0;
  std::string error;
};

// Advances ceil(t_final/dt) implicit steps from the initial data; each step
// iterates the decoupled map to tolerance. On non-convergence the partial
// trajectory is returned with the failing step recorded.
inline Trajectory run_transient(const Mesh& mesh, const MaterialModel& model,
                                const PicardSettings& settings, double t_final, double dt) {
  if (t_final < 0.0) throw DomainError("run_transient: t_final must be nonnegative");
  if (!(dt > 0.0)) throw DomainError("run_transient: dt must be positive");

  Trajectory traj;
  traj.states.push_back(initial_state(mesh, model));
  traj.picard_iterations.push_back(0);
  traj.residuals.push_back(0.0);

  const int steps = static_cast<int>(std::ceil(t_final / dt - 1e-12));
  for (int s = 0; s < steps; ++s) {
    StepResult r = advance_step(mesh, model, traj.states.back(), dt, settings);
    traj.states.push_back(r.state);
    traj.picard_iterations.push_back(r.iterations);
    traj.residuals.push_back(r.residual);
    if (!r.converged) {
      traj.completed = false;
      traj.failed_step = s + 1;
      traj.last_residual = r.residual;
      traj.error = "picard iteration did not reach tolerance";
      break;
    }
  }
  return traj;
}

}  // namespace tec
