#pragma once

#include "pdeit/geometry.hpp"

#include <Eigen/Dense>

namespace pdeit {

// Conforming triangulation of the unit disc built by uniform quadrisection
// of an inscribed square fan, with boundary edge midpoints projected
// radially onto the circle. After `refine` steps the boundary ring has
// L = 4 * 2^refine vertices whose angles coincide with boundary_grid(L).
struct FemMesh {
  Eigen::Matrix<double, Eigen::Dynamic, 2> vertices;
  Eigen::Matrix<int, Eigen::Dynamic, 3> triangles;
  // ring[l] is the vertex index at angle boundary_grid(L).theta[l].
  Eigen::VectorXi ring;
  int refine = 0;

  int num_vertices() const { return static_cast<int>(vertices.rows()); }
  int num_triangles() const { return static_cast<int>(triangles.rows()); }
  int ring_size() const { return static_cast<int>(ring.size()); }
  Complex vertex(int v) const { return Complex(vertices(v, 0), vertices(v, 1)); }
};

// refine in [1, 9]; the ring then has 8 to 2048 vertices.
FemMesh build_disc_mesh(int refine);

double mesh_min_angle(const FemMesh& mesh);

// Smallest distance from 1 of |vertex| over the ring.
double ring_radius_defect(const FemMesh& mesh);

}  // namespace pdeit
