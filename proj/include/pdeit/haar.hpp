#pragma once

#include "pdeit/geometry.hpp"

#include <vector>

namespace pdeit {

/// Descriptor for one basis function. Levels follow the convention
/// level 1 = scaling function, level 2 = mother wavelet, and the constant
/// pieces of a level-j wavelet are L_arc / 2^(j-1) long on balanced splits.
struct HaarFn {
  int level = 1;         // 1 = scaling, >= 2 wavelet generations coarse to fine
  int offset_cells = 0;  // first grid cell of the support
  int width_cells = 0;   // support width in grid cells
  double height = 0.0;   // L2-normalized height of the positive piece
};

/// Orthonormal piecewise-constant wavelet family on an arc Gamma.
/// Phi holds grid samples scaled by sqrt(arclength/L) so that every column
/// has unit l2 norm; the continuum functions phi_j = Phi_j / sqrt(h) are
/// orthonormal in L2(Gamma) and vanish off Gamma.
struct HaarBasis {
  Arc arc;
  BoundaryGrid grid;  // the grid on Gamma the basis is sampled on
  int J = 0;
  int L = 0;
  MatrixXd Phi;  // L x J
  std::vector<HaarFn> fns;
};

/// Build the family: scaling function first, then wavelet generations coarse
/// to fine, left to right. Each wavelet splits its support into near-equal
/// halves (left half gets the extra cell when the count is odd), which
/// reduces to the classical dyadic family whenever the cell count is a power
/// of two and yields exactly fraction*J_full functions on partial arcs.
/// Throws std::invalid_argument for misaligned grids (grid length vs arc
/// length mismatch, non-uniform spacing) and std::length_error for J > L.
HaarBasis build_haar(const Arc& arc, int J, const BoundaryGrid& grid);

/// c = Phi^T * samples (orthonormal projection). Throws std::invalid_argument
/// on length mismatch.
VectorXcd analyze(const HaarBasis& basis, const VectorXcd& samples);

/// Phi * coefficients. Throws std::invalid_argument on length mismatch.
VectorXcd synthesize(const HaarBasis& basis, const VectorXcd& coefficients);

/// Scatter arc-length values into a parent-grid-length vector, zero off Gamma.
VectorXcd zero_extend(const HaarBasis& basis, const VectorXcd& on_arc);

/// Plain-text descriptor table (index, level, offset, width, height per line).
std::string describe(const HaarBasis& basis);

}  // namespace pdeit
