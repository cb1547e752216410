#include "pdeit/fft2.hpp"

#include <unsupported/Eigen/FFT>

#include <stdexcept>
#include <vector>

namespace pdeit {

namespace {

enum class Direction { Forward, Inverse };

Eigen::MatrixXcd transform2(const Eigen::MatrixXcd& grid, Direction dir) {
  const Eigen::Index rows = grid.rows();
  const Eigen::Index cols = grid.cols();
  if (rows == 0 || cols == 0) throw std::invalid_argument("fft2: empty grid");

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  Eigen::MatrixXcd out(rows, cols);

  std::vector<std::complex<double>> in_buf(rows);
  std::vector<std::complex<double>> out_buf(rows);
  for (Eigen::Index j = 0; j < cols; ++j) {
    Eigen::VectorXcd::Map(in_buf.data(), rows) = grid.col(j);
    if (dir == Direction::Forward) {
      fft.fwd(out_buf, in_buf);
    } else {
      fft.inv(out_buf, in_buf);
    }
    out.col(j) = Eigen::VectorXcd::Map(out_buf.data(), rows);
  }

  in_buf.resize(cols);
  out_buf.resize(cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    Eigen::VectorXcd::Map(in_buf.data(), cols) = out.row(i).transpose();
    if (dir == Direction::Forward) {
      fft.fwd(out_buf, in_buf);
    } else {
      fft.inv(out_buf, in_buf);
    }
    out.row(i) = Eigen::VectorXcd::Map(out_buf.data(), cols).transpose();
  }
  if (dir == Direction::Inverse) {
    out /= static_cast<double>(rows * cols);
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd fft2(const Eigen::MatrixXcd& grid) { return transform2(grid, Direction::Forward); }

Eigen::MatrixXcd ifft2(const Eigen::MatrixXcd& grid) { return transform2(grid, Direction::Inverse); }

int next_pow2(int n) {
  if (n <= 0) throw std::invalid_argument("next_pow2: n must be positive");
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

Eigen::MatrixXcd periodic_convolve(const Eigen::MatrixXcd& kernel, const Eigen::MatrixXcd& field) {
  if (kernel.rows() != field.rows() || kernel.cols() != field.cols()) {
    throw std::invalid_argument("periodic_convolve: shape mismatch");
  }
  return ifft2(fft2(kernel).cwiseProduct(fft2(field)));
}

AperiodicConvolution::AperiodicConvolution(const Eigen::MatrixXcd& kernel, int field_rows,
                                           int field_cols)
    : field_rows_(field_rows), field_cols_(field_cols) {
  if (field_rows < 1 || field_cols < 1) {
    throw std::invalid_argument("AperiodicConvolution: field shape must be positive");
  }
  if (kernel.rows() != 2 * field_rows - 1 || kernel.cols() != 2 * field_cols - 1) {
    throw std::invalid_argument("AperiodicConvolution: kernel must be (2r-1) x (2c-1)");
  }
  pad_rows_ = next_pow2(static_cast<int>(kernel.rows()));
  pad_cols_ = next_pow2(static_cast<int>(kernel.cols()));
  Eigen::MatrixXcd padded = Eigen::MatrixXcd::Zero(pad_rows_, pad_cols_);
  padded.topLeftCorner(kernel.rows(), kernel.cols()) = kernel;
  kernel_hat_ = fft2(padded);
}

Eigen::MatrixXcd AperiodicConvolution::apply(const Eigen::MatrixXcd& field) const {
  if (field.rows() != field_rows_ || field.cols() != field_cols_) {
    throw std::invalid_argument("AperiodicConvolution: field shape mismatch");
  }
  Eigen::MatrixXcd padded = Eigen::MatrixXcd::Zero(pad_rows_, pad_cols_);
  padded.topLeftCorner(field_rows_, field_cols_) = field;
  const Eigen::MatrixXcd prod = ifft2(kernel_hat_.cwiseProduct(fft2(padded)));
  // Offset (0,0) of the kernel sits at index (rows-1, cols-1), so the
  // aligned output block starts there.
  return prod.block(field_rows_ - 1, field_cols_ - 1, field_rows_, field_cols_);
}

}  // namespace pdeit
