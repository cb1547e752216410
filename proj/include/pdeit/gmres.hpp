#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace pdeit {

struct GmresOptions {
  double tol = 1e-10;
  int restart = 50;
  int max_iterations = 200;
};

template <typename Scalar>
struct GmresResult {
  Eigen::Vector<Scalar, Eigen::Dynamic> x;
  std::vector<double> residual_history;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

inline double abs2(double v) { return v * v; }
inline double abs2(const std::complex<double>& v) { return std::norm(v); }

template <typename Scalar>
Scalar conjugate(Scalar v) {
  if constexpr (std::is_floating_point_v<Scalar>) {
    return v;
  } else {
    return std::conj(v);
  }
}

template <typename Scalar>
void make_givens(Scalar a, Scalar b, double& c, Scalar& s) {
  const double bb = std::abs(b);
  if (bb == 0.0) {
    c = 1.0;
    s = Scalar(0);
    return;
  }
  const double aa = std::abs(a);
  if (aa == 0.0) {
    c = 0.0;
    s = conjugate(b) / bb;
    return;
  }
  const double t = std::sqrt(abs2(a) + abs2(b));
  c = aa / t;
  s = (a / aa) * (conjugate(b) / t);
}

}  // namespace detail

// Solves apply(x) = rhs by restarted GMRES with modified Gram-Schmidt
// Arnoldi and Givens rotations. Scalar is double or std::complex<double>.
// residual_history holds relative residual estimates, one entry for the
// initial residual and one per inner iteration.
template <typename Scalar>
GmresResult<Scalar> gmres(
    const std::function<Eigen::Vector<Scalar, Eigen::Dynamic>(
        const Eigen::Vector<Scalar, Eigen::Dynamic>&)>& apply,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& rhs, const GmresOptions& opt = {},
    const Eigen::Vector<Scalar, Eigen::Dynamic>* x0 = nullptr) {
  using Vec = Eigen::Vector<Scalar, Eigen::Dynamic>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  if (opt.restart < 1 || opt.max_iterations < 1 || opt.tol <= 0.0) {
    throw std::invalid_argument("gmres: options must be positive");
  }
  const Eigen::Index n = rhs.size();
  GmresResult<Scalar> result;
  result.x = x0 ? *x0 : Vec::Zero(n);
  if (x0 && x0->size() != n) {
    throw std::invalid_argument("gmres: initial guess size mismatch");
  }

  const double bnorm = rhs.norm();
  if (bnorm == 0.0) {
    result.x = Vec::Zero(n);
    result.converged = true;
    result.residual_history.push_back(0.0);
    return result;
  }

  const int m = opt.restart;
  Mat V(n, m + 1);
  Mat H = Mat::Zero(m + 1, m);
  std::vector<double> cs(m);
  std::vector<Scalar> sn(m);
  Vec g(m + 1);

  Vec r = rhs - apply(result.x);
  double beta = r.norm();
  result.residual_history.push_back(beta / bnorm);

  while (result.iterations < opt.max_iterations) {
    if (beta / bnorm <= opt.tol) {
      result.converged = true;
      return result;
    }
    V.col(0) = r / beta;
    g.setZero();
    g(0) = Scalar(beta);
    int j = 0;
    bool breakdown = false;
    for (; j < m && result.iterations < opt.max_iterations; ++j) {
      Vec w = apply(V.col(j));
      for (int i = 0; i <= j; ++i) {
        const Scalar hij = V.col(i).dot(w);
        H(i, j) = hij;
        w -= hij * V.col(i);
      }
      const double hnext = w.norm();
      H(j + 1, j) = Scalar(hnext);
      ++result.iterations;

      for (int i = 0; i < j; ++i) {
        const Scalar t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -detail::conjugate(sn[i]) * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t;
      }
      detail::make_givens(H(j, j), H(j + 1, j), cs[j], sn[j]);
      H(j, j) = cs[j] * H(j, j) + sn[j] * H(j + 1, j);
      H(j + 1, j) = Scalar(0);
      g(j + 1) = -detail::conjugate(sn[j]) * g(j);
      g(j) = cs[j] * g(j);

      const double est = std::abs(g(j + 1));
      result.residual_history.push_back(est / bnorm);

      if (hnext <= 1e-14 * bnorm) {
        breakdown = true;
        ++j;
        break;
      }
      V.col(j + 1) = w / hnext;
      if (est / bnorm <= opt.tol) {
        ++j;
        break;
      }
    }
    if (j > 0) {
      const Vec y = H.topLeftCorner(j, j).template triangularView<Eigen::Upper>().solve(g.head(j));
      result.x += V.leftCols(j) * y;
    }
    r = rhs - apply(result.x);
    beta = r.norm();
    if (breakdown) break;
  }
  result.converged = beta / bnorm <= opt.tol;
  return result;
}

}  // namespace pdeit
