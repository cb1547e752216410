#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <utility>

namespace pdeit {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Eigen::VectorXi;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Uniform arclength discretization of the unit circle (or of an arc of it).
/// Nodes sit at the centers of the boundary elements they represent, so a
/// node carries the midpoint-rule weight h.
struct BoundaryGrid {
  int L = 0;          // number of nodes
  VectorXd theta;     // node angles, strictly increasing
  VectorXcd z;        // node positions e^{i theta}
  double h = 0.0;     // arclength step between nodes
  int offset = 0;     // index of the first node within the parent full grid
  int parent_L = 0;   // node count of the parent full-boundary grid

  double arclength() const { return h * static_cast<double>(L); }
};

/// Contiguous accessible boundary arc Gamma, centered at a given angle.
/// Arclength distance d along Gamma runs counterclockwise from z_begin,
/// d(z_begin) = 0 and d(z_end) = length.
struct Arc {
  double fraction = 1.0;  // |Gamma| / |boundary|
  double center = 0.0;    // angle of the arc midpoint
  double length = 2.0 * kPi;
  Complex z_begin{1.0, 0.0};
  Complex z_end{1.0, 0.0};
};

/// Full-boundary grid with theta_l = -pi + (2l-1)*pi/L, l = 1..L.
/// Throws std::invalid_argument for L < 4 or odd L.
BoundaryGrid boundary_grid(int L);

/// Restrict a full grid to the contiguous arc of the given fraction centered
/// at theta = 0. Throws std::invalid_argument when fraction*L is not an even
/// integer (the window cannot align with cell boundaries symmetrically).
std::pair<Arc, BoundaryGrid> arc_subset(const BoundaryGrid& grid, double fraction);

enum class Smoothness { C2, Discontinuous };

/// Admittivity gamma on the plane: closed-form evaluator plus metadata.
/// gamma == 1 outside the unit disc and on the annulus |z| > 1 - rho_bd.
struct ConductivityField {
  std::function<Complex(Complex)> evaluator;
  Smoothness smoothness = Smoothness::C2;
  std::string tag = "homogeneous";
  double amplitude = 0.0;
  Complex center{0.0, 0.0};
  double radius = 0.0;
  bool real_valued = true;

  Complex operator()(Complex z) const { return evaluator(z); }

  /// Samples on an N x N grid covering [-half_width, half_width]^2,
  /// row i = Im axis index, column j = Re axis index.
  MatrixXcd sample_grid(int N, double half_width = 1.0) const;
};

/// Width of the annulus adjacent to the boundary on which every phantom
/// must equal 1 (both reconstruction methods require it).
inline constexpr double kBoundaryAnnulus = 0.1;

ConductivityField phantom_homogeneous();

/// Twice differentiable bump: sigma = 1 + a*(1 - r^2)^3 inside r < 1,
/// r = |z - z0| / rho. Throws std::domain_error if the support reaches the
/// homogeneous annulus.
ConductivityField phantom_c2(double a = 2.0, Complex z0 = Complex(0.3, 0.3), double rho = 0.4);

/// Jump phantom: sigma = 1 + a inside |z - z0| < rho, 1 elsewhere.
ConductivityField phantom_discontinuous(double a = 1.0, Complex z0 = Complex(-0.3, 0.2),
                                        double rho = 0.25);

}  // namespace pdeit
