#pragma once

#include "pdeit/geometry.hpp"

#include <filesystem>
#include <string>

namespace pdeit {

/// Principal-branch complex exponential integral E1(w).
/// Power series for small |w| and near the negative real axis (where the
/// terms do not cancel), modified-Lentz continued fraction elsewhere.
/// Throws std::domain_error at w = 0.
Complex expint_e1(Complex w);

/// Reduced Green's function g_1(w) = (e^{-iw}/2pi) Re E1(-iw).
/// Throws std::domain_error at w = 0 (logarithmic singularity).
Complex g1(Complex w);

/// g_k(z) = g_1(kz) by the scaling identity.
Complex gk(Complex z, Complex k);

/// G_k(z) = e^{ikz} g_k(z) = (1/2pi) Re E1(-ikz); real-valued.
/// Throws std::domain_error at z = 0 and std::invalid_argument at k = 0
/// (the k = 0 limiting kernel is excluded).
Complex Gk(Complex z, Complex k);

/// The four boundary kernels entering the integral equations.
enum class Kernel {
  Standard,         // G_k(z - zeta)
  Conjugated,       // G_k(-conj(z) + conj(zeta))
  Cauchy,           // e^{i conj(k) (z - zeta)} / (4 pi (z - zeta))
  CauchyConjugate,  // conj( e^{i k (z - zeta)} / (4 pi (z - zeta)) )
};

struct KernelMatrix {
  Complex k;
  Kernel variant = Kernel::Standard;
  MatrixXcd values;  // L x L, zero diagonal
};

/// Entry (l, l') = kernel(z_l, zeta_l') for l != l', hard zero on the
/// diagonal. k = 0 is allowed only for the Cauchy variants.
KernelMatrix kernel_matrix(const BoundaryGrid& grid, Complex k, Kernel variant);

/// Samples of g_1 on a log-polar grid (geometric radii r_min..r_max down the
/// rows, uniform angles across the columns), persisted as matrix text.
struct LogPolarTable {
  double r_min = 0.0;
  double r_max = 0.0;
  int n_r = 0;
  int n_theta = 0;
  MatrixXcd values;

  /// Deterministic key identifying the grid geometry.
  std::string key() const;
};

LogPolarTable tabulate_g1(double r_min, double r_max, int n_r, int n_theta);

/// Load a table matching the requested geometry from the file if its stored
/// key agrees, otherwise tabulate and write it.
LogPolarTable load_or_tabulate_g1(const std::filesystem::path& file, double r_min, double r_max,
                                  int n_r, int n_theta);

}  // namespace pdeit
