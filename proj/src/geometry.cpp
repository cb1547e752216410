#include "pdeit/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pdeit {

BoundaryGrid boundary_grid(int L) {
  if (L < 4 || L % 2 != 0) {
    throw std::invalid_argument("invalid discretization: boundary grid needs L >= 4 and even, got L=" +
                                std::to_string(L));
  }
  BoundaryGrid g;
  g.L = L;
  g.parent_L = L;
  g.offset = 0;
  g.h = 2.0 * kPi / static_cast<double>(L);
  g.theta.resize(L);
  g.z.resize(L);
  for (int l = 0; l < L; ++l) {
    g.theta[l] = -kPi + (2.0 * (l + 1) - 1.0) * kPi / static_cast<double>(L);
    g.z[l] = std::polar(1.0, g.theta[l]);
  }
  return g;
}

std::pair<Arc, BoundaryGrid> arc_subset(const BoundaryGrid& grid, double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw std::invalid_argument("alignment: arc fraction must lie in (0, 1], got " +
                                std::to_string(fraction));
  }
  const double count_real = fraction * static_cast<double>(grid.L);
  const int n = static_cast<int>(std::lround(count_real));
  if (std::abs(count_real - n) > 1e-9 || n < 2 || n % 2 != 0) {
    throw std::invalid_argument("alignment: fraction*L must be an even integer, got fraction*L=" +
                                std::to_string(count_real));
  }

  Arc arc;
  arc.fraction = fraction;
  arc.center = 0.0;
  arc.length = fraction * 2.0 * kPi;
  arc.z_begin = std::polar(1.0, -arc.length / 2.0);
  arc.z_end = std::polar(1.0, arc.length / 2.0);

  BoundaryGrid sub;
  sub.L = n;
  sub.parent_L = grid.L;
  sub.offset = grid.L / 2 - n / 2;
  sub.h = grid.h;
  sub.theta = grid.theta.segment(sub.offset, n);
  sub.z = grid.z.segment(sub.offset, n);
  return {arc, sub};
}

MatrixXcd ConductivityField::sample_grid(int N, double half_width) const {
  MatrixXcd vals(N, N);
  for (int i = 0; i < N; ++i) {
    const double y = -half_width + 2.0 * half_width * i / (N - 1);
    for (int j = 0; j < N; ++j) {
      const double x = -half_width + 2.0 * half_width * j / (N - 1);
      vals(i, j) = evaluator(Complex(x, y));
    }
  }
  return vals;
}

namespace {

void require_compact_support(Complex z0, double rho) {
  if (std::abs(z0) + rho > 1.0 - kBoundaryAnnulus + 1e-12) {
    throw std::domain_error("support violation: inclusion |z-z0|<rho must stay inside |z| < " +
                            std::to_string(1.0 - kBoundaryAnnulus));
  }
}

}  // namespace

ConductivityField phantom_homogeneous() {
  ConductivityField f;
  f.evaluator = [](Complex) { return Complex(1.0, 0.0); };
  f.smoothness = Smoothness::C2;
  f.tag = "homogeneous";
  return f;
}

ConductivityField phantom_c2(double a, Complex z0, double rho) {
  require_compact_support(z0, rho);
  ConductivityField f;
  f.evaluator = [a, z0, rho](Complex z) {
    const double r = std::abs(z - z0) / rho;
    if (r >= 1.0) return Complex(1.0, 0.0);
    const double s = 1.0 - r * r;
    return Complex(1.0 + a * s * s * s, 0.0);
  };
  f.smoothness = Smoothness::C2;
  f.tag = "c2";
  f.amplitude = a;
  f.center = z0;
  f.radius = rho;
  return f;
}

ConductivityField phantom_discontinuous(double a, Complex z0, double rho) {
  require_compact_support(z0, rho);
  ConductivityField f;
  f.evaluator = [a, z0, rho](Complex z) {
    return std::abs(z - z0) < rho ? Complex(1.0 + a, 0.0) : Complex(1.0, 0.0);
  };
  f.smoothness = Smoothness::Discontinuous;
  f.tag = "disc";
  f.amplitude = a;
  f.center = z0;
  f.radius = rho;
  return f;
}

}  // namespace pdeit
