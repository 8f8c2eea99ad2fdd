#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <functional>
#include <vector>

#include "tec/core.hpp"
#include "tec/mesh.hpp"

namespace tec {

using SpMat = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;
using Triplet = Eigen::Triplet<double>;

// P1 basis gradients and centroid of one cell; gradients are constant per
// cell for both intervals and triangles.
struct CellGeometry {
  std::array<Vec2, 3> grad{};  // nodal basis gradients (third unused in 1-D)
  Vec2 centroid{0.0, 0.0};
  double volume = 0.0;
  int nodes = 2;
};

inline CellGeometry cell_geometry(const Mesh& m, int c) {
  CellGeometry g;
  const auto& cl = m.cells[c];
  if (m.dimension == 1) {
    const double x0 = m.nodes[cl[0]][0], x1 = m.nodes[cl[1]][0];
    const double h = x1 - x0;
    g.grad[0] = {-1.0 / h, 0.0};
    g.grad[1] = {1.0 / h, 0.0};
    g.centroid = {0.5 * (x0 + x1), 0.0};
    g.volume = h;
    g.nodes = 2;
  } else {
    const Vec2 a = m.nodes[cl[0]], b = m.nodes[cl[1]], d = m.nodes[cl[2]];
    const double det = (b[0] - a[0]) * (d[1] - a[1]) - (d[0] - a[0]) * (b[1] - a[1]);
    if (det <= 0.0) throw AssemblyError("degenerate or misoriented triangle");
    g.volume = 0.5 * det;
    g.grad[0] = {(b[1] - d[1]) / det, (d[0] - b[0]) / det};
    g.grad[1] = {(d[1] - a[1]) / det, (a[0] - d[0]) / det};
    g.grad[2] = {(a[1] - b[1]) / det, (b[0] - a[0]) / det};
    g.centroid = {(a[0] + b[0] + d[0]) / 3.0, (a[1] + b[1] + d[1]) / 3.0};
    g.nodes = 3;
  }
  return g;
}

inline Vec2 cell_gradient(const Mesh& m, const CellGeometry& g, int c, const Vector& f) {
  Vec2 out{0.0, 0.0};
  for (int k = 0; k < g.nodes; ++k) out = out + f[m.cells[c][k]] * g.grad[k];
  return out;
}

inline double cell_mean(const Mesh& m, const CellGeometry& g, int c, const Vector& f) {
  double s = 0.0;
  for (int k = 0; k < g.nodes; ++k) s += f[m.cells[c][k]];
  return s / g.nodes;
}

// Lumped mass vector m_i = sum_cells |cell|/nodes_per_cell.
inline Vector lumped_mass(const Mesh& m) {
  Vector out = Vector::Zero(m.num_nodes());
  for (int c = 0; c < m.num_cells(); ++c) {
    const double w = m.cell_volumes[c] / m.nodes_per_cell();
    for (int k = 0; k < m.nodes_per_cell(); ++k) out[m.cells[c][k]] += w;
  }
  return out;
}

// Lumped boundary mass restricted to faces accepted by `pred`.
inline Vector boundary_lumped_mass(const Mesh& m,
                                   const std::function<bool(BoundaryTag)>& pred) {
  Vector out = Vector::Zero(m.num_nodes());
  for (const auto& f : m.boundary_faces) {
    if (!pred(f.tag)) continue;
    const double w = f.area / m.nodes_per_face();
    for (int k = 0; k < m.nodes_per_face(); ++k)
      if (f.nodes[k] >= 0) out[f.nodes[k]] += w;
  }
  return out;
}

inline Vector boundary_lumped_mass(const Mesh& m, BoundaryTag tag) {
  return boundary_lumped_mass(m, [tag](BoundaryTag t) { return t == tag; });
}

// Stiffness with a per-cell symmetric 2x2 coefficient {kxx, kxy, kyy}
// (1-D uses kxx only): A_ij += vol * (K grad_j) . grad_i.
inline void add_stiffness(const Mesh& m,
                          const std::function<std::array<double, 3>(int)>& coeff,
                          std::vector<Triplet>& out) {
  for (int c = 0; c < m.num_cells(); ++c) {
    const CellGeometry g = cell_geometry(m, c);
    const auto k = coeff(c);
    for (int a = 0; a < g.nodes; ++a) {
      const Vec2 kg{k[0] * g.grad[a][0] + k[1] * g.grad[a][1],
                    k[1] * g.grad[a][0] + k[2] * g.grad[a][1]};
      for (int b = 0; b < g.nodes; ++b)
        out.emplace_back(m.cells[c][b], m.cells[c][a], g.volume * dot(kg, g.grad[b]));
    }
  }
}

// rhs_i += sum_cells vol * G_cell . grad_i  (the weak term \int G . grad v).
inline void add_gradient_source(const Mesh& m, const std::function<Vec2(int)>& field,
                                Vector& rhs) {
  for (int c = 0; c < m.num_cells(); ++c) {
    const CellGeometry g = cell_geometry(m, c);
    const Vec2 G = field(c);
    for (int k = 0; k < g.nodes; ++k) rhs[m.cells[c][k]] += g.volume * dot(G, g.grad[k]);
  }
}

// Discrete L2(Omega) norm via the lumped mass.
inline double l2_norm(const Vector& mass, const Vector& f) {
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i) s += mass[i] * f[i] * f[i];
  return std::sqrt(s);
}

// ||grad f||_{L^p(Omega)}: cellwise constant gradients.
inline double gradient_lp_norm(const Mesh& m, const Vector& f, double p) {
  double s = 0.0;
  for (int c = 0; c < m.num_cells(); ++c) {
    const CellGeometry g = cell_geometry(m, c);
    s += m.cell_volumes[c] * std::pow(norm(cell_gradient(m, g, c, f)), p);
  }
  return std::pow(s, 1.0 / p);
}

// ||f||_{L^q} over tagged boundary faces (lumped).
inline double boundary_lq_norm(const Mesh& m, const Vector& f, double q,
                               const std::function<bool(BoundaryTag)>& pred) {
  double s = 0.0;
  for (const auto& face : m.boundary_faces) {
    if (!pred(face.tag)) continue;
    const double w = face.area / m.nodes_per_face();
    for (int k = 0; k < m.nodes_per_face(); ++k)
      if (face.nodes[k] >= 0) s += w * std::pow(std::abs(f[face.nodes[k]]), q);
  }
  return std::pow(s, 1.0 / q);
}

// \int_{dOmega} f ds with the trapezoid rule (exact for P1 traces).
inline double boundary_integral(const Mesh& m, const Vector& f) {
  double s = 0.0;
  for (const auto& face : m.boundary_faces) {
    const double w = face.area / m.nodes_per_face();
    for (int k = 0; k < m.nodes_per_face(); ++k)
      if (face.nodes[k] >= 0) s += w * f[face.nodes[k]];
  }
  return s;
}

}  // namespace tec
