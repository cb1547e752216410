#include "pdeit/faddeev.hpp"

#include "pdeit/io.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pdeit {

namespace {

Complex e1_series(Complex w) {
  constexpr double kEulerGamma = 0.57721566490153286;
  Complex sum = 0.0;
  Complex term = 1.0;
  for (int n = 1; n <= 400; ++n) {
    term *= -w / static_cast<double>(n);
    const Complex add = -term / static_cast<double>(n);
    sum += add;
    if (std::abs(add) < 1e-18 * std::max(1.0, std::abs(sum))) break;
  }
  return -kEulerGamma - std::log(w) + sum;
}

Complex e1_continued_fraction(Complex w) {
  constexpr double kTiny = 1e-300;
  Complex b = w + 1.0;
  Complex c = 1.0 / kTiny;
  Complex d = 1.0 / b;
  Complex h = d;
  for (int i = 1; i <= 2000; ++i) {
    const double a = -static_cast<double>(i) * static_cast<double>(i);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    if (c == Complex(0.0)) c = kTiny;
    const Complex delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-w) * h;
}

}  // namespace

Complex expint_e1(Complex w) {
  if (w == Complex(0.0)) {
    throw std::domain_error("singularity: E1 diverges at w=0");
  }
  const double aw = std::abs(w);
  const double th = std::abs(std::arg(w));
  if (aw <= 6.0 || th > 0.75 * kPi) return e1_series(w);
  return e1_continued_fraction(w);
}

Complex g1(Complex w) {
  if (w == Complex(0.0)) {
    throw std::domain_error("singularity: g1 diverges logarithmically at 0");
  }
  return std::exp(-kI * w) * (std::real(expint_e1(-kI * w)) / (2.0 * kPi));
}

Complex gk(Complex z, Complex k) { return g1(k * z); }

Complex Gk(Complex z, Complex k) {
  if (k == Complex(0.0)) {
    throw std::invalid_argument("use-limiting-kernel: k=0 is excluded");
  }
  if (z == Complex(0.0)) {
    throw std::domain_error("singularity: G_k diverges logarithmically at 0");
  }
  return Complex(std::real(expint_e1(-kI * (k * z))) / (2.0 * kPi), 0.0);
}

KernelMatrix kernel_matrix(const BoundaryGrid& grid, Complex k, Kernel variant) {
  const bool cauchy_kind = variant == Kernel::Cauchy || variant == Kernel::CauchyConjugate;
  if (!cauchy_kind && k == Complex(0.0)) {
    throw std::invalid_argument("use-limiting-kernel: k=0 is excluded for Green kernels");
  }
  const int L = grid.L;
  KernelMatrix out;
  out.k = k;
  out.variant = variant;
  out.values = MatrixXcd::Zero(L, L);
  for (int l = 0; l < L; ++l) {
    const Complex z = grid.z[l];
    for (int m = 0; m < L; ++m) {
      if (m == l) continue;
      const Complex zeta = grid.z[m];
      switch (variant) {
        case Kernel::Standard:
          out.values(l, m) = Gk(z - zeta, k);
          break;
        case Kernel::Conjugated:
          out.values(l, m) = Gk(-std::conj(z) + std::conj(zeta), k);
          break;
        case Kernel::Cauchy: {
          const Complex d = z - zeta;
          out.values(l, m) = std::exp(kI * std::conj(k) * d) / (4.0 * kPi * d);
          break;
        }
        case Kernel::CauchyConjugate: {
          const Complex d = z - zeta;
          out.values(l, m) = std::conj(std::exp(kI * k * d) / (4.0 * kPi * d));
          break;
        }
      }
    }
  }
  return out;
}

std::string LogPolarTable::key() const {
  std::ostringstream os;
  os << "g1-logpolar:" << format_double(r_min) << ":" << format_double(r_max) << ":" << n_r << ":"
     << n_theta;
  return os.str();
}

LogPolarTable tabulate_g1(double r_min, double r_max, int n_r, int n_theta) {
  if (!(r_min > 0.0) || !(r_max > r_min) || n_r < 2 || n_theta < 1) {
    throw std::invalid_argument("invalid discretization: log-polar table needs 0 < r_min < r_max, n_r >= 2, n_theta >= 1");
  }
  LogPolarTable t;
  t.r_min = r_min;
  t.r_max = r_max;
  t.n_r = n_r;
  t.n_theta = n_theta;
  t.values.resize(n_r, n_theta);
  const double log_step = std::log(r_max / r_min) / (n_r - 1);
  for (int i = 0; i < n_r; ++i) {
    const double r = r_min * std::exp(i * log_step);
    for (int j = 0; j < n_theta; ++j) {
      const double th = -kPi + 2.0 * kPi * j / n_theta;
      t.values(i, j) = g1(std::polar(r, th));
    }
  }
  return t;
}

LogPolarTable load_or_tabulate_g1(const std::filesystem::path& file, double r_min, double r_max,
                                  int n_r, int n_theta) {
  LogPolarTable want;
  want.r_min = r_min;
  want.r_max = r_max;
  want.n_r = n_r;
  want.n_theta = n_theta;
  if (std::filesystem::exists(file)) {
    const MatrixFile stored = read_matrix(file);
    const auto it = stored.header.find("key");
    if (it != stored.header.end() && it->second == want.key() &&
        stored.values.rows() == n_r && stored.values.cols() == n_theta) {
      want.values = stored.values;
      return want;
    }
  }
  LogPolarTable fresh = tabulate_g1(r_min, r_max, n_r, n_theta);
  write_matrix(file, fresh.values, {{"key", fresh.key()}});
  return fresh;
}

}  // namespace pdeit
