#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "tec/core.hpp"

namespace tec {

enum class BoundaryTag { anode, cathode, wall, outer };

inline const char* to_string(BoundaryTag t) {
  switch (t) {
    case BoundaryTag::anode: return "anode";
    case BoundaryTag::cathode: return "cathode";
    case BoundaryTag::wall: return "wall";
    case BoundaryTag::outer: return "outer";
  }
  return "?";
}

inline BoundaryTag boundary_tag_from_string(const std::string& s) {
  if (s == "anode") return BoundaryTag::anode;
  if (s == "cathode") return BoundaryTag::cathode;
  if (s == "wall") return BoundaryTag::wall;
  if (s == "outer") return BoundaryTag::outer;
  throw InvalidGeometryError("unknown boundary tag '" + s + "'");
}

// Tag priority used when a single per-node tag is required (corners in 2-D
// touch two sides): anode > cathode > wall > outer.
inline int tag_priority(BoundaryTag t) {
  switch (t) {
    case BoundaryTag::anode: return 0;
    case BoundaryTag::cathode: return 1;
    case BoundaryTag::wall: return 2;
    case BoundaryTag::outer: return 3;
  }
  return 4;
}

struct BoundaryFace {
  // 1-D: nodes[0] is the boundary point, nodes[1] = -1, area = 1 (unit
  // cross-section convention). 2-D: an edge with two node indices.
  std::array<int, 2> nodes{-1, -1};
  BoundaryTag tag = BoundaryTag::outer;
  double area = 0.0;
  Vec2 normal{0.0, 0.0};
};

struct Mesh {
  int dimension = 1;
  std::vector<Vec2> nodes;                 // coordinates [m]
  std::vector<std::array<int, 3>> cells;   // intervals store {a, b, -1}
  std::vector<double> cell_volumes;        // [m^n]
  std::vector<BoundaryFace> boundary_faces;
  double domain_measure = 0.0;             // |Omega| [m^n]

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }
  int nodes_per_cell() const { return dimension == 1 ? 2 : 3; }
  int nodes_per_face() const { return dimension == 1 ? 1 : 2; }
};

inline Mesh build_interval_mesh(double length, int cells, BoundaryTag left_tag,
                                BoundaryTag right_tag) {
  if (!(length > 0.0)) throw InvalidGeometryError("interval length must be positive");
  if (cells < 1) throw InvalidGeometryError("interval mesh needs at least one cell");

  Mesh m;
  m.dimension = 1;
  m.nodes.resize(cells + 1);
  const double h = length / cells;
  for (int i = 0; i <= cells; ++i) m.nodes[i] = {i * h, 0.0};
  m.cells.resize(cells);
  m.cell_volumes.resize(cells);
  for (int i = 0; i < cells; ++i) {
    m.cells[i] = {i, i + 1, -1};
    m.cell_volumes[i] = m.nodes[i + 1][0] - m.nodes[i][0];
  }
  m.boundary_faces.push_back({{0, -1}, left_tag, 1.0, {-1.0, 0.0}});
  m.boundary_faces.push_back({{cells, -1}, right_tag, 1.0, {1.0, 0.0}});
  m.domain_measure = length;
  return m;
}

struct SideTags {
  BoundaryTag left = BoundaryTag::anode;
  BoundaryTag right = BoundaryTag::cathode;
  BoundaryTag bottom = BoundaryTag::wall;
  BoundaryTag top = BoundaryTag::outer;
};

// Structured triangulation of an axis-aligned rectangle: each grid quad is
// split along its (i,j)-(i+1,j+1) diagonal.
inline Mesh build_rectangle_mesh(double width, double height, int nx, int ny,
                                 const SideTags& tags) {
  if (!(width > 0.0) || !(height > 0.0))
    throw InvalidGeometryError("rectangle dimensions must be positive");
  if (nx < 1 || ny < 1) throw InvalidGeometryError("rectangle mesh needs nx, ny >= 1");

  Mesh m;
  m.dimension = 2;
  const double hx = width / nx;
  const double hy = height / ny;
  auto node_id = [nx](int i, int j) { return j * (nx + 1) + i; };

  m.nodes.resize((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) m.nodes[node_id(i, j)] = {i * hx, j * hy};

  m.cells.reserve(2 * nx * ny);
  m.cell_volumes.reserve(2 * nx * ny);
  const double tri_area = 0.5 * hx * hy;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int n00 = node_id(i, j), n10 = node_id(i + 1, j);
      const int n01 = node_id(i, j + 1), n11 = node_id(i + 1, j + 1);
      m.cells.push_back({n00, n10, n11});
      m.cells.push_back({n00, n11, n01});
      m.cell_volumes.push_back(tri_area);
      m.cell_volumes.push_back(tri_area);
    }
  }

  for (int j = 0; j < ny; ++j) {
    m.boundary_faces.push_back({{node_id(0, j + 1), node_id(0, j)}, tags.left, hy, {-1.0, 0.0}});
    m.boundary_faces.push_back({{node_id(nx, j), node_id(nx, j + 1)}, tags.right, hy, {1.0, 0.0}});
  }
  for (int i = 0; i < nx; ++i) {
    m.boundary_faces.push_back({{node_id(i, 0), node_id(i + 1, 0)}, tags.bottom, hx, {0.0, -1.0}});
    m.boundary_faces.push_back({{node_id(i + 1, ny), node_id(i, ny)}, tags.top, hx, {0.0, 1.0}});
  }

  m.domain_measure = width * height;
  return m;
}

inline double boundary_measure(const Mesh& m, BoundaryTag tag) {
  double s = 0.0;
  for (const auto& f : m.boundary_faces)
    if (f.tag == tag) s += f.area;
  return s;
}

inline double total_boundary_measure(const Mesh& m) {
  double s = 0.0;
  for (const auto& f : m.boundary_faces) s += f.area;
  return s;
}

// Electrode/electrolyte interface Gamma = anode + cathode.
inline double electrode_measure(const Mesh& m) {
  return boundary_measure(m, BoundaryTag::anode) + boundary_measure(m, BoundaryTag::cathode);
}

// Single tag for a boundary node; corners resolved by the fixed priority.
inline BoundaryTag boundary_node_tag(const Mesh& m, int node) {
  int best = 5;
  BoundaryTag out = BoundaryTag::outer;
  for (const auto& f : m.boundary_faces) {
    if (f.nodes[0] == node || f.nodes[1] == node) {
      if (tag_priority(f.tag) < best) {
        best = tag_priority(f.tag);
        out = f.tag;
      }
    }
  }
  if (best == 5) throw InvalidGeometryError("node is not on the boundary");
  return out;
}

}  // namespace tec
