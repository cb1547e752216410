#pragma once

#include <Eigen/Dense>

#include <complex>

namespace pdeit {

// Two-dimensional discrete Fourier transforms of column-major complex grids,
// with the unscaled forward convention and 1/(rows*cols) on the inverse.
Eigen::MatrixXcd fft2(const Eigen::MatrixXcd& grid);
Eigen::MatrixXcd ifft2(const Eigen::MatrixXcd& grid);

int next_pow2(int n);

// Circular 2D convolution of two equal-shape grids.
Eigen::MatrixXcd periodic_convolve(const Eigen::MatrixXcd& kernel, const Eigen::MatrixXcd& field);

// Linear (aperiodic) 2D convolution.
//
// The kernel is given on offset pairs (di, dj) with di in [-rows+1, rows-1]
// and dj likewise, stored as a (2*rows-1) x (2*cols-1) grid whose entry
// (di + rows - 1, dj + cols - 1) multiplies field(i - di, j - dj). The
// result has the shape of the field:
//   out(i, j) = sum_{p, q} kernel(i - p + rows - 1, j - q + cols - 1) * field(p, q).
// Precomputing the plan stores the padded kernel transform for reuse.
class AperiodicConvolution {
 public:
  AperiodicConvolution(const Eigen::MatrixXcd& kernel, int field_rows, int field_cols);

  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& field) const;

  int rows() const { return field_rows_; }
  int cols() const { return field_cols_; }

 private:
  int field_rows_;
  int field_cols_;
  int pad_rows_;
  int pad_cols_;
  Eigen::MatrixXcd kernel_hat_;
};

}  // namespace pdeit
