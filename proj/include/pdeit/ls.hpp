#pragma once

#include "pdeit/errors.hpp"
#include "pdeit/geometry.hpp"
#include "pdeit/gmres.hpp"

#include <string>

namespace pdeit {

/// Scalar potential sampled on the periodic square grid [-s, s)^2 with N
/// points per side (left-closed, step 2s/N). Row index runs along the
/// imaginary axis, column index along the real axis.
struct PotentialGrid {
  double s = 2.1;
  int N = 256;
  double h = 0.0;
  MatrixXd q;
  std::string sigma_tag;

  Complex point(int row, int col) const {
    return Complex(-s + col * h, -s + row * h);
  }
};

/// q = (Laplacian of sqrt(sigma)) / sqrt(sigma) from the closed radial form
/// of the stock twice-differentiable bump family; homogeneous fields give
/// q = 0. Throws SmoothnessViolationError for jump phantoms and
/// std::invalid_argument for complex fields, evaluators that do not match
/// the stock family, or invalid grid parameters.
PotentialGrid schrodinger_potential(const ConductivityField& field, double s = 2.1, int N = 256);

/// Field solution of the scattering equation on the periodic grid.
struct LsSolution {
  Complex k;
  double s = 0.0;
  MatrixXcd mu;
  int iterations = 0;
  double residual = 0.0;
};

/// Solve mu = 1 - g_k * (q mu) on the periodic grid, the convolution
/// realized by fast transforms with the kernel's logarithmic singularity
/// replaced by its analytic cell average. Non-convergence of the Krylov
/// iteration raises OracleFailureError; k = 0 raises
/// ExcludedFrequencyError.
LsSolution lippmann_schwinger(const PotentialGrid& pg, Complex k,
                              const GmresOptions& options = GmresOptions{});

/// psi = e^{ikz} mu at the nodes of a boundary grid, mu interpolated from
/// the periodic grid.
VectorXcd oracle_trace(const LsSolution& sol, const BoundaryGrid& grid);

/// Bicubic convolution interpolation (Keys kernel, a = -1/2) of a periodic
/// grid field covering [-s, s)^2 at the point z.
Complex interpolate_bicubic(const MatrixXcd& field, double s, Complex z);

}  // namespace pdeit
