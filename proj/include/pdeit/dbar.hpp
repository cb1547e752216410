#pragma once

#include "pdeit/scattering.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace pdeit {

/// Uniform square reconstruction grid [-half, half)^2, left-closed with
/// step 2*half/n; row index runs along Im z, column index along Re z.
struct ZGrid {
  int n = 64;
  double half = 1.05;
  double h = 2.0 * 1.05 / 64;

  Complex point(int row, int col) const { return Complex(-half + col * h, -half + row * h); }
};

/// Validated grid: n a power of two (spectral differentiation), at least
/// 16, and half wide enough that the taper to 1 completes inside the box.
ZGrid make_zgrid(int n = 64, double half = 1.05);

/// Frequency-grid solution of the scalar inversion equation at a list of
/// spatial points: the field mu(z, .), its value at k = 0, and the
/// conductivity estimate mu(z,0)^2 per point.
struct DbarM1Solution {
  std::vector<Complex> z;
  std::vector<MatrixXcd> mu;
  VectorXcd mu0;
  VectorXcd sigma_hat;
  double R = 0.0;
  int max_iterations = 0;
  double max_residual = 0.0;
};

/// Solve mu = 1 + (1/4pi) C[t e(-z, .) conj(mu) / conj(k')] on the
/// truncated frequency disc for each z, with C the grid Cauchy transform
/// realized by padded fast transforms and the real-linear coupling handled
/// by a Krylov iteration on stacked real and imaginary parts. The t/conj(k')
/// weight is zero at k = 0. Non-convergence raises DbarFailureError.
DbarM1Solution dbar_solve_m1(const ScatteringGrid& t, const std::vector<Complex>& zs,
                             const GmresOptions& options = GmresOptions{});

/// Matrix CGO values at k = 0 over a reconstruction grid, from the coupled
/// frequency-domain system driven by the off-diagonal data.
struct DbarM2Solution {
  ZGrid grid;
  MatrixXcd M11, M12, M21, M22;
  MatrixXcd Mplus, Mminus;
  double R = 0.0;
  double fraction = 1.0;
  std::string sigma_tag;
  int max_iterations = 0;
  double max_residual = 0.0;
};

/// For each grid point z, solve the pair of coupled equations whose
/// frequency derivative couples each component to the other evaluated at
/// the conjugate-reflected node, with unimodular phase factors and the
/// off-diagonal data as multipliers; asymptotic value I. Solves proceed
/// row-major with the previous point's solution as warm start. Non-
/// convergence raises DbarFailureError.
DbarM2Solution dbar_solve_m2(const ScatteringGrid& s12, const ScatteringGrid& s21,
                             const ZGrid& zgrid, const GmresOptions& options = GmresOptions{});

/// Conductivity field recovered on a reconstruction grid, through both
/// off-diagonal potentials, with summary metrics taken over |z| <= 1.
struct Reconstruction {
  ZGrid grid;
  MatrixXcd gamma;
  MatrixXcd gamma_q12;
  MatrixXcd gamma_q21;
  std::string method_tag;
  std::string sigma_tag;
  double fraction = 1.0;
  double R = 0.0;
  double max_re = 0.0;
  double min_re = 0.0;
  Complex centroid;
  double consistency = 0.0;
  double imag_defect = 0.0;
};

/// Recover the conductivity from matrix CGO values at k = 0: the summed
/// entries are tapered to 1 outside the unit disc by a raised cosine
/// (1 for |z| <= 0.92, 0 from |z| >= 1.02), differentiated spectrally,
/// divided to give the two off-diagonal potentials, restricted to the unit
/// disc, and exponentiated through the solid Cauchy transform. gamma is
/// the pointwise average of the two recovery formulas. A summed entry with
/// modulus below 1e-8 raises DivisionSingularityError.
Reconstruction recover_gamma(const DbarM2Solution& m);

/// Writes <stem>.txt (the averaged field as matrix text) and
/// <stem>_metrics.txt (key=value metrics manifest).
void save_reconstruction(const std::filesystem::path& stem, const Reconstruction& r);

}  // namespace pdeit
