#pragma once

#include "pdeit/bie.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace pdeit {

/// The three nonlinear frequency-domain data families: the scalar
/// transform and the two off-diagonal matrix entries.
enum class ScatteringKind { T, S12, S21 };

std::string scattering_kind_name(ScatteringKind kind);

/// Complex data sampled on the uniform square frequency grid [-R, R]^2
/// with step dk; entries outside the truncation disc |k| <= R are zero.
/// Row index runs along Im k, column index along Re k; k = 0 is the
/// central node.
struct ScatteringGrid {
  ScatteringKind kind = ScatteringKind::T;
  double R = 0.0;
  double dk = 0.0;
  MatrixXcd values;
  std::string sigma_tag;
  double fraction = 1.0;

  int n() const { return static_cast<int>(values.rows()); }
  Complex point(int row, int col) const { return Complex(-R + col * dk, -R + row * dk); }
  bool in_disc(int row, int col) const { return std::abs(point(row, col)) <= R + 1e-12; }
};

/// Zero-filled grid with the node layout implied by R and dk. R must be a
/// positive integer multiple of dk so that k = 0 falls on a node.
ScatteringGrid make_scattering_grid(ScatteringKind kind, double R, double dk);

/// Frequencies at which boundary traces are needed to fill a grid: every
/// node with 0.1 <= |k| <= R, in row-major node order.
std::vector<Complex> scattering_frequencies(double R, double dk);

/// Scalar transform t(k) by midpoint quadrature of e^{i conj(k) conj(z)}
/// against the boundary action of the map difference on the psi trace,
/// taken over the accessible arc. Nodes with |k| < 0.1 stay zero until
/// interpolate_to_zero. A node with no matching trace column raises
/// std::invalid_argument.
ScatteringGrid scattering_t(const DNMap& dn, const HaarBasis& basis, const TraceSet& psi,
                            double R, double dk);

/// Off-diagonal matrix data from traces of the two first-order-system
/// families: the Cauchy-type quadratures produce the off-diagonal boundary
/// fields, which are then integrated against e^{-i conj(k) z} e^{i theta}
/// (first entry) and e^{i conj(k) conj(z)} e^{-i theta} (second entry) over
/// the accessible arc.
std::pair<ScatteringGrid, ScatteringGrid> scattering_S(const DNMap& dn, const HaarBasis& basis,
                                                       const TraceSet& u1, const TraceSet& u2,
                                                       double R, double dk);

/// Fill every node with |k| < 0.1 with the value of a least-squares
/// quadratic in (Re k, Im k) fitted over the annulus 0.1 <= |k| <= 0.5;
/// exact for polynomials of degree <= 2. Fewer than six fit nodes raises
/// std::invalid_argument.
ScatteringGrid interpolate_to_zero(const ScatteringGrid& s);

/// Matrix text with kind, R, dk, phantom tag, and fraction in the header.
void save_scattering_grid(const std::filesystem::path& file, const ScatteringGrid& s);
ScatteringGrid load_scattering_grid(const std::filesystem::path& file);

}  // namespace pdeit
