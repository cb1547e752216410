#include "pdeit/haar.hpp"

#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace pdeit {

HaarBasis build_haar(const Arc& arc, int J, const BoundaryGrid& grid) {
  const int L = grid.L;
  if (J > L) {
    throw std::length_error("overdetermined basis: J=" + std::to_string(J) +
                            " exceeds grid size L=" + std::to_string(L));
  }
  if (J < 1) throw std::invalid_argument("invalid discretization: J must be positive");
  if (std::abs(grid.arclength() - arc.length) > 1e-9) {
    throw std::invalid_argument("alignment: grid covers arclength " +
                                std::to_string(grid.arclength()) + " but arc has length " +
                                std::to_string(arc.length));
  }
  for (int l = 1; l < L; ++l) {
    if (std::abs((grid.theta[l] - grid.theta[l - 1]) - grid.h) > 1e-12) {
      throw std::invalid_argument("alignment: grid spacing is not uniform");
    }
  }

  HaarBasis basis;
  basis.arc = arc;
  basis.grid = grid;
  basis.J = J;
  basis.L = L;
  basis.Phi = MatrixXd::Zero(L, J);
  basis.fns.reserve(J);

  basis.Phi.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(L)));
  basis.fns.push_back({1, 0, L, 1.0 / std::sqrt(arc.length)});

  struct Block {
    int start, len, depth;
  };
  std::deque<Block> queue;
  if (L >= 2) queue.push_back({0, L, 0});

  int col = 1;
  while (col < J && !queue.empty()) {
    const Block b = queue.front();
    queue.pop_front();
    const int left = (b.len + 1) / 2;
    const int right = b.len - left;
    const double denom = static_cast<double>(left + right);
    const double alpha = std::sqrt(right / (left * denom));
    const double beta = std::sqrt(left / (right * denom));
    basis.Phi.col(col).segment(b.start, left).setConstant(alpha);
    basis.Phi.col(col).segment(b.start + left, right).setConstant(-beta);
    basis.Phi.col(col).normalize();
    basis.fns.push_back({b.depth + 2, b.start, b.len, alpha / std::sqrt(grid.h)});
    ++col;
    if (left >= 2) queue.push_back({b.start, left, b.depth + 1});
    if (right >= 2) queue.push_back({b.start + left, right, b.depth + 1});
  }
  if (col < J) {
    throw std::length_error("overdetermined basis: grid admits only " + std::to_string(col) +
                            " functions, J=" + std::to_string(J) + " requested");
  }
  return basis;
}

VectorXcd analyze(const HaarBasis& basis, const VectorXcd& samples) {
  if (samples.size() != basis.L) {
    throw std::invalid_argument("shape mismatch: expected " + std::to_string(basis.L) +
                                " samples, got " + std::to_string(samples.size()));
  }
  return basis.Phi.transpose() * samples;
}

VectorXcd synthesize(const HaarBasis& basis, const VectorXcd& coefficients) {
  if (coefficients.size() != basis.J) {
    throw std::invalid_argument("shape mismatch: expected " + std::to_string(basis.J) +
                                " coefficients, got " + std::to_string(coefficients.size()));
  }
  return basis.Phi * coefficients;
}

VectorXcd zero_extend(const HaarBasis& basis, const VectorXcd& on_arc) {
  if (on_arc.size() != basis.L) {
    throw std::invalid_argument("shape mismatch: expected " + std::to_string(basis.L) +
                                " arc values, got " + std::to_string(on_arc.size()));
  }
  VectorXcd full = VectorXcd::Zero(basis.grid.parent_L);
  full.segment(basis.grid.offset, basis.L) = on_arc;
  return full;
}

std::string describe(const HaarBasis& basis) {
  std::ostringstream os;
  os << "# index level offset_cells width_cells height\n";
  for (std::size_t j = 0; j < basis.fns.size(); ++j) {
    const HaarFn& f = basis.fns[j];
    os << j + 1 << " " << f.level << " " << f.offset_cells << " " << f.width_cells << " "
       << f.height << "\n";
  }
  return os.str();
}

}  // namespace pdeit
