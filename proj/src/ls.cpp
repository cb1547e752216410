#include "pdeit/ls.hpp"

#include "pdeit/faddeev.hpp"
#include "pdeit/fft2.hpp"

#include <cmath>
#include <sstream>

namespace pdeit {

namespace {

constexpr double kEulerGamma = 0.57721566490153286;

/// Average of ln|u| over the unit square centered at the origin.
constexpr double kSquareLogAverage = kPi / 4.0 - 1.5 - 0.34657359027997264;

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Radial factor of the potential for sigma = 1 + a (1 - t^2)^3, t < 1,
/// in the unit-radius scaled variable. The caller divides by radius^2.
double bump_potential(double t, double a) {
  const double w = 1.0 - t * t;
  const double b = w * w * w;
  const double db = -6.0 * t * w * w;
  const double ddb = -6.0 * w * w + 24.0 * t * t * w;
  const double usq = 1.0 + a * b;
  const double u = std::sqrt(usq);
  const double du = a * db / (2.0 * u);
  const double ddu = a * ddb / (2.0 * u) - a * a * db * db / (4.0 * u * usq);
  const double laplacian = t < 1e-12 ? 2.0 * ddu : ddu + du / t;
  return laplacian / u;
}

}  // namespace

PotentialGrid schrodinger_potential(const ConductivityField& field, double s, int N) {
  if (!field.real_valued) {
    throw std::invalid_argument("potential requires a real conductivity");
  }
  if (field.smoothness == Smoothness::Discontinuous) {
    throw SmoothnessViolationError("potential undefined for jump conductivities");
  }
  if (s < 2.1) {
    throw std::invalid_argument("grid half-width must cover the disc plus wrap margin");
  }
  if (!power_of_two(N) || N < 8) {
    throw std::invalid_argument("grid size must be a power of two, at least 8");
  }

  PotentialGrid pg;
  pg.s = s;
  pg.N = N;
  pg.h = 2.0 * s / N;
  pg.q = MatrixXd::Zero(N, N);
  pg.sigma_tag = field.tag;
  if (field.amplitude == 0.0) {
    return pg;
  }

  const double a = field.amplitude;
  const double rho = field.radius;
  const Complex z0 = field.center;
  for (Complex probe : {z0, z0 + Complex(0.4 * rho, 0.0), z0 + Complex(0.0, -0.7 * rho)}) {
    const double t = std::abs(probe - z0) / rho;
    const double want = 1.0 + a * std::pow(1.0 - t * t, 3.0);
    if (std::abs(field(probe).real() - want) > 1e-12) {
      throw std::invalid_argument("potential requires the stock bump family");
    }
  }

  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const double t = std::abs(pg.point(i, j) - z0) / rho;
      if (t < 1.0) {
        pg.q(i, j) = bump_potential(t, a) / (rho * rho);
      }
    }
  }
  return pg;
}

LsSolution lippmann_schwinger(const PotentialGrid& pg, Complex k, const GmresOptions& options) {
  if (k == Complex(0.0, 0.0)) {
    throw ExcludedFrequencyError("scattering equation excludes k = 0");
  }
  if (pg.q.rows() != pg.N || pg.q.cols() != pg.N) {
    throw std::invalid_argument("potential grid shape disagrees with its size");
  }
  const int N = pg.N;
  const double h = pg.h;
  const double cell = h * h;

  MatrixXcd kernel(N, N);
  for (int i = 0; i < N; ++i) {
    const int di = i < N / 2 ? i : i - N;
    for (int j = 0; j < N; ++j) {
      const int dj = j < N / 2 ? j : j - N;
      if (di == 0 && dj == 0) {
        kernel(i, j) =
            -cell * (kEulerGamma + std::log(std::abs(k)) + std::log(h) + kSquareLogAverage) /
            (2.0 * kPi);
      } else {
        kernel(i, j) = cell * gk(Complex(dj * h, di * h), k);
      }
    }
  }
  const MatrixXcd kernel_hat = fft2(kernel);
  const MatrixXcd qc = pg.q.cast<Complex>();

  const auto apply = [&](const VectorXcd& v) {
    const Eigen::Map<const MatrixXcd> field(v.data(), N, N);
    const MatrixXcd conv = ifft2(MatrixXcd(fft2(MatrixXcd(qc.cwiseProduct(field)))
                                               .cwiseProduct(kernel_hat)));
    MatrixXcd out = field + conv;
    return VectorXcd(Eigen::Map<const VectorXcd>(out.data(), N * N));
  };

  const VectorXcd rhs = VectorXcd::Ones(N * N);
  const GmresResult<Complex> sol = gmres<Complex>(apply, rhs, options);
  if (!sol.converged) {
    std::ostringstream msg;
    msg << "scattering solve at k = (" << k.real() << ", " << k.imag()
        << ") stalled with residual "
        << (sol.residual_history.empty() ? 1.0 : sol.residual_history.back());
    throw OracleFailureError(msg.str(), sol.residual_history);
  }

  LsSolution out;
  out.k = k;
  out.s = pg.s;
  out.mu = Eigen::Map<const MatrixXcd>(sol.x.data(), N, N);
  out.iterations = sol.iterations;
  out.residual = sol.residual_history.empty() ? 0.0 : sol.residual_history.back();
  return out;
}

namespace {

/// Keys cubic convolution weight, a = -1/2, support |t| < 2.
double keys_weight(double t) {
  const double x = std::abs(t);
  if (x < 1.0) {
    return ((1.5 * x - 2.5) * x) * x + 1.0;
  }
  if (x < 2.0) {
    return (((-0.5 * x + 2.5) * x) - 4.0) * x + 2.0;
  }
  return 0.0;
}

int wrap_index(int i, int n) {
  const int m = i % n;
  return m < 0 ? m + n : m;
}

}  // namespace

Complex interpolate_bicubic(const MatrixXcd& field, double s, Complex z) {
  if (field.rows() != field.cols() || field.rows() < 4) {
    throw std::invalid_argument("interpolation needs a square grid of at least 4 points");
  }
  const int N = static_cast<int>(field.rows());
  const double h = 2.0 * s / N;
  const double fx = (z.real() + s) / h;
  const double fy = (z.imag() + s) / h;
  const int jx = static_cast<int>(std::floor(fx));
  const int iy = static_cast<int>(std::floor(fy));
  const double tx = fx - jx;
  const double ty = fy - iy;

  Complex value(0.0, 0.0);
  for (int di = -1; di <= 2; ++di) {
    const double wy = keys_weight(ty - di);
    if (wy == 0.0) continue;
    const int row = wrap_index(iy + di, N);
    Complex row_value(0.0, 0.0);
    for (int dj = -1; dj <= 2; ++dj) {
      const double wx = keys_weight(tx - dj);
      if (wx == 0.0) continue;
      row_value += wx * field(row, wrap_index(jx + dj, N));
    }
    value += wy * row_value;
  }
  return value;
}

VectorXcd oracle_trace(const LsSolution& sol, const BoundaryGrid& grid) {
  VectorXcd trace(grid.L);
  for (int l = 0; l < grid.L; ++l) {
    const Complex z = grid.z[l];
    trace[l] = std::exp(kI * sol.k * z) * interpolate_bicubic(sol.mu, sol.s, z);
  }
  return trace;
}

}  // namespace pdeit
