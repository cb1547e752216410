#include "pdeit/mesh.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace pdeit {

namespace {
struct Builder {
  std::vector<std::array<double, 2>> vertices;
  std::vector<bool> on_circle;
  std::vector<std::array<int, 3>> triangles;

  int add_vertex(double x, double y, bool boundary) {
    vertices.push_back({x, y});
    on_circle.push_back(boundary);
    return static_cast<int>(vertices.size()) - 1;
  }
};

// Quadrisect every triangle; midpoints of edges joining two circle vertices
// are projected back onto the circle. In this construction an edge with two
// circle endpoints is always a boundary edge.
void refine_once(Builder& b) {
  std::unordered_map<long long, int> midpoint;
  midpoint.reserve(b.triangles.size() * 2);
  auto mid = [&](int u, int v) {
    const long long key =
        (static_cast<long long>(std::min(u, v)) << 32) | static_cast<long long>(std::max(u, v));
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    double x = 0.5 * (b.vertices[u][0] + b.vertices[v][0]);
    double y = 0.5 * (b.vertices[u][1] + b.vertices[v][1]);
    const bool boundary = b.on_circle[u] && b.on_circle[v];
    if (boundary) {
      const double r = std::hypot(x, y);
      x /= r;
      y /= r;
    }
    const int idx = b.add_vertex(x, y, boundary);
    midpoint.emplace(key, idx);
    return idx;
  };

  std::vector<std::array<int, 3>> next;
  next.reserve(b.triangles.size() * 4);
  for (const auto& t : b.triangles) {
    const int ab = mid(t[0], t[1]);
    const int bc = mid(t[1], t[2]);
    const int ca = mid(t[2], t[0]);
    next.push_back({t[0], ab, ca});
    next.push_back({ab, t[1], bc});
    next.push_back({ca, bc, t[2]});
    next.push_back({ab, bc, ca});
  }
  b.triangles = std::move(next);
}

}  // namespace

FemMesh build_disc_mesh(int refine) {
  if (refine < 1 || refine > 9) {
    throw std::invalid_argument("build_disc_mesh: refine must be in [1, 9]");
  }
  const int L = 4 << refine;
  const BoundaryGrid grid = boundary_grid(L);

  // Seed square corners on the target angular grid, a quarter turn apart,
  // so midpoint subdivision fills in exactly the remaining grid angles.
  Builder b;
  b.add_vertex(0.0, 0.0, false);
  const int l0 = L / 8;
  for (int m = 0; m < 4; ++m) {
    const double theta = grid.theta[(l0 + m * (L / 4)) % L];
    b.add_vertex(std::cos(theta), std::sin(theta), true);
  }
  for (int m = 0; m < 4; ++m) {
    b.triangles.push_back({0, 1 + m, 1 + (m + 1) % 4});
  }
  for (int r = 0; r < refine; ++r) refine_once(b);

  FemMesh mesh;
  mesh.refine = refine;
  const int nv = static_cast<int>(b.vertices.size());
  mesh.vertices.resize(nv, 2);
  for (int v = 0; v < nv; ++v) {
    mesh.vertices(v, 0) = b.vertices[v][0];
    mesh.vertices(v, 1) = b.vertices[v][1];
  }
  const int nt = static_cast<int>(b.triangles.size());
  mesh.triangles.resize(nt, 3);
  for (int t = 0; t < nt; ++t) {
    mesh.triangles(t, 0) = b.triangles[t][0];
    mesh.triangles(t, 1) = b.triangles[t][1];
    mesh.triangles(t, 2) = b.triangles[t][2];
  }

  mesh.ring = Eigen::VectorXi::Constant(L, -1);
  const double h = 2.0 * kPi / L;
  for (int v = 0; v < nv; ++v) {
    if (!b.on_circle[v]) continue;
    const double theta = std::atan2(mesh.vertices(v, 1), mesh.vertices(v, 0));
    const int l = static_cast<int>(std::lround((theta + kPi) / h - 0.5));
    if (l < 0 || l >= L || std::abs(theta - grid.theta[l]) > 1e-9) {
      throw std::logic_error("build_disc_mesh: boundary vertex off the angular grid");
    }
    if (mesh.ring[l] != -1) throw std::logic_error("build_disc_mesh: duplicate ring vertex");
    mesh.ring[l] = v;
    mesh.vertices(v, 0) = std::cos(grid.theta[l]);
    mesh.vertices(v, 1) = std::sin(grid.theta[l]);
  }
  for (int l = 0; l < L; ++l) {
    if (mesh.ring[l] == -1) throw std::logic_error("build_disc_mesh: missing ring vertex");
  }
  return mesh;
}

double mesh_min_angle(const FemMesh& mesh) {
  double worst = 180.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int c = 0; c < 3; ++c) {
      const Complex a = mesh.vertex(mesh.triangles(t, c));
      const Complex u = mesh.vertex(mesh.triangles(t, (c + 1) % 3)) - a;
      const Complex v = mesh.vertex(mesh.triangles(t, (c + 2) % 3)) - a;
      const double dot = u.real() * v.real() + u.imag() * v.imag();
      const double angle = std::acos(dot / (std::abs(u) * std::abs(v))) * 180.0 / kPi;
      worst = std::min(worst, angle);
    }
  }
  return worst;
}

double ring_radius_defect(const FemMesh& mesh) {
  double worst = 0.0;
  for (int l = 0; l < mesh.ring_size(); ++l) {
    worst = std::max(worst, std::abs(std::abs(mesh.vertex(mesh.ring[l])) - 1.0));
  }
  return worst;
}

}  // namespace pdeit
