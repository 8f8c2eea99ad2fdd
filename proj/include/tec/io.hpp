#pragma once

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tec/coupler.hpp"
#include "tec/core.hpp"
#include "tec/fem.hpp"
#include "tec/mesh.hpp"

namespace tec {

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// Legacy ASCII VTK unstructured grid with nodal scalar fields.
inline void write_vtk(const Mesh& mesh,
                      const std::vector<std::pair<std::string, Vector>>& fields,
                      const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << "# vtk DataFile Version 3.0\n";
  f << "teccell fields\n";
  f << "ASCII\n";
  f << "DATASET UNSTRUCTURED_GRID\n";
  f << "POINTS " << mesh.num_nodes() << " double\n";
  for (const auto& nd : mesh.nodes)
    f << format_double(nd[0]) << " " << format_double(nd[1]) << " 0\n";
  const int npc = mesh.nodes_per_cell();
  f << "CELLS " << mesh.num_cells() << " " << mesh.num_cells() * (npc + 1) << "\n";
  for (const auto& c : mesh.cells) {
    f << npc;
    for (int k = 0; k < npc; ++k) f << " " << c[k];
    f << "\n";
  }
  f << "CELL_TYPES " << mesh.num_cells() << "\n";
  const int vtk_type = mesh.dimension == 1 ? 3 : 5;  // VTK_LINE / VTK_TRIANGLE
  for (int c = 0; c < mesh.num_cells(); ++c) f << vtk_type << "\n";
  f << "POINT_DATA " << mesh.num_nodes() << "\n";
  for (const auto& [name, values] : fields) {
    f << "SCALARS " << name << " double 1\n";
    f << "LOOKUP_TABLE default\n";
    for (int k = 0; k < values.size(); ++k) f << format_double(values[k]) << "\n";
  }
}

// CSV time series of field norms; one '#' header line documents the columns
// and units. Deterministic for a fixed trajectory.
inline void write_trajectory_csv(const Mesh& mesh, const Trajectory& traj,
                                 const std::vector<std::string>& species_names,
                                 const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << "# t[s],theta_l2[K],";
  for (const auto& n : species_names) f << "c_" << n << "_l2[mol/m^3],";
  f << "phi_l2[V],picard_iterations,residual\n";
  const Vector mass = lumped_mass(mesh);
  const double vol = mass.sum();
  auto mean_l2 = [&](const Vector& v) { return l2_norm(mass, v) / std::sqrt(vol); };
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    const auto& st = traj.states[s];
    f << format_double(st.time) << "," << format_double(mean_l2(st.theta)) << ",";
    for (const auto& c : st.concentrations) f << format_double(mean_l2(c)) << ",";
    f << format_double(mean_l2(st.phi)) << "," << traj.picard_iterations[s] << ","
      << format_double(traj.residuals[s]) << "\n";
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace tec
