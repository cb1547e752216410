#include "pdeit/dbar.hpp"

#include "pdeit/fft2.hpp"
#include "pdeit/io.hpp"

#include <cmath>
#include <sstream>

namespace pdeit {

namespace {

struct DiscNodes {
  std::vector<int> rows;
  std::vector<int> cols;
  std::vector<int> reflected;  // index of the node at conjugate-reflected k
  Eigen::MatrixXi pos;         // grid position -> node index, -1 outside
  int center = -1;             // node index of k = 0
  int count = 0;
};

DiscNodes collect_disc_nodes(const ScatteringGrid& g) {
  DiscNodes d;
  const int n = g.n();
  d.pos = Eigen::MatrixXi::Constant(n, n, -1);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      if (!g.in_disc(row, col)) continue;
      d.pos(row, col) = d.count++;
      d.rows.push_back(row);
      d.cols.push_back(col);
    }
  }
  d.reflected.resize(static_cast<std::size_t>(d.count));
  for (int j = 0; j < d.count; ++j) {
    const int r = d.pos(n - 1 - d.rows[static_cast<std::size_t>(j)],
                        d.cols[static_cast<std::size_t>(j)]);
    d.reflected[static_cast<std::size_t>(j)] = r;
  }
  d.center = d.pos(n / 2, n / 2);
  if (d.center < 0) throw std::invalid_argument("frequency grid does not contain k = 0");
  return d;
}

/// Grid Cauchy transform plan: out(j) = sum_m (step^2/pi) w(m) / (k_j - k_m)
/// with the singular cell dropped (its principal value over a centered
/// square vanishes).
AperiodicConvolution cauchy_plan(int n, double step) {
  MatrixXcd kernel(2 * n - 1, 2 * n - 1);
  const double scale = step * step / kPi;
  for (int di = -(n - 1); di <= n - 1; ++di) {
    for (int dj = -(n - 1); dj <= n - 1; ++dj) {
      kernel(di + n - 1, dj + n - 1) =
          (di == 0 && dj == 0) ? Complex(0.0, 0.0)
                               : scale / Complex(dj * step, di * step);
    }
  }
  return AperiodicConvolution(kernel, n, n);
}

[[noreturn]] void raise_dbar_failure(const char* what, Complex z,
                                     const std::vector<double>& history) {
  std::ostringstream msg;
  msg << what << " did not converge at z = " << format_complex(z) << ": residual "
      << (history.empty() ? 1.0 : history.back());
  throw DbarFailureError(msg.str(), history);
}

}  // namespace

ZGrid make_zgrid(int n, double half) {
  if (n < 16 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("reconstruction grid size must be a power of two, at least 16");
  }
  if (!(half > 1.02)) {
    throw std::invalid_argument("reconstruction grid must extend past the taper radius 1.02");
  }
  ZGrid g;
  g.n = n;
  g.half = half;
  g.h = 2.0 * half / n;
  return g;
}

DbarM1Solution dbar_solve_m1(const ScatteringGrid& t, const std::vector<Complex>& zs,
                             const GmresOptions& options) {
  if (t.kind != ScatteringKind::T) {
    throw std::invalid_argument("scalar inversion needs the scalar transform grid");
  }
  const int n = t.n();
  const DiscNodes disc = collect_disc_nodes(t);
  const int nd = disc.count;
  const AperiodicConvolution plan = cauchy_plan(n, t.dk);

  VectorXcd kvals(nd);
  VectorXcd weight(nd);  // t(k)/conj(k) with the k = 0 node zeroed
  for (int j = 0; j < nd; ++j) {
    const int row = disc.rows[static_cast<std::size_t>(j)];
    const int col = disc.cols[static_cast<std::size_t>(j)];
    const Complex k = t.point(row, col);
    kvals[j] = k;
    weight[j] = std::abs(k) < 1e-12 ? Complex(0.0, 0.0) : t.values(row, col) / std::conj(k);
  }

  DbarM1Solution out;
  out.z = zs;
  out.R = t.R;
  out.mu.reserve(zs.size());
  out.mu0.resize(static_cast<Eigen::Index>(zs.size()));
  out.sigma_hat.resize(static_cast<Eigen::Index>(zs.size()));

  VectorXd rhs(2 * nd);
  rhs.head(nd).setOnes();
  rhs.tail(nd).setZero();
  VectorXd warm;

  for (std::size_t zi = 0; zi < zs.size(); ++zi) {
    const Complex z = zs[zi];
    VectorXcd mult(nd);
    for (int j = 0; j < nd; ++j) {
      mult[j] = (0.25 / kPi) * weight[j] * std::polar(1.0, -2.0 * (kvals[j] * z).real());
    }
    const auto expand = [&](const VectorXd& x) {
      MatrixXcd w = MatrixXcd::Zero(n, n);
      for (int j = 0; j < nd; ++j) {
        const Complex mu(x[j], x[nd + j]);
        w(disc.rows[static_cast<std::size_t>(j)], disc.cols[static_cast<std::size_t>(j)]) =
            mult[j] * std::conj(mu);
      }
      return w;
    };
    const auto apply = [&](const VectorXd& x) {
      const MatrixXcd v = plan.apply(expand(x));
      VectorXd y(2 * nd);
      for (int j = 0; j < nd; ++j) {
        const Complex r =
            Complex(x[j], x[nd + j]) -
            v(disc.rows[static_cast<std::size_t>(j)], disc.cols[static_cast<std::size_t>(j)]);
        y[j] = r.real();
        y[nd + j] = r.imag();
      }
      return y;
    };
    const VectorXd* x0 = warm.size() == 2 * nd ? &warm : nullptr;
    const GmresResult<double> sol = gmres<double>(apply, rhs, options, x0);
    if (!sol.converged) raise_dbar_failure("scalar inversion", z, sol.residual_history);
    warm = sol.x;

    const MatrixXcd v = plan.apply(expand(sol.x));
    MatrixXcd mu = v.array() + Complex(1.0, 0.0);
    for (int j = 0; j < nd; ++j) {
      mu(disc.rows[static_cast<std::size_t>(j)], disc.cols[static_cast<std::size_t>(j)]) =
          Complex(sol.x[j], sol.x[nd + j]);
    }
    out.mu.push_back(std::move(mu));
    out.mu0[static_cast<Eigen::Index>(zi)] =
        Complex(sol.x[disc.center], sol.x[nd + disc.center]);
    out.sigma_hat[static_cast<Eigen::Index>(zi)] =
        out.mu0[static_cast<Eigen::Index>(zi)] * out.mu0[static_cast<Eigen::Index>(zi)];
    out.max_iterations = std::max(out.max_iterations, sol.iterations);
    if (!sol.residual_history.empty()) {
      out.max_residual = std::max(out.max_residual, sol.residual_history.back());
    }
  }
  return out;
}

DbarM2Solution dbar_solve_m2(const ScatteringGrid& s12, const ScatteringGrid& s21,
                             const ZGrid& zgrid, const GmresOptions& options) {
  if (s12.kind != ScatteringKind::S12 || s21.kind != ScatteringKind::S21) {
    throw std::invalid_argument("matrix inversion needs the two off-diagonal grids");
  }
  if (s12.n() != s21.n() || s12.R != s21.R || s12.dk != s21.dk) {
    throw std::invalid_argument("off-diagonal grids have mismatched layouts");
  }
  if (std::abs(s12.fraction - s21.fraction) > 1e-12 || s12.sigma_tag != s21.sigma_tag) {
    throw std::invalid_argument("off-diagonal grids describe different data sets");
  }
  const int n = s12.n();
  const DiscNodes disc = collect_disc_nodes(s12);
  const int nd = disc.count;
  const AperiodicConvolution plan = cauchy_plan(n, s12.dk);

  VectorXcd kvals(nd), v12(nd), v21(nd);
  for (int j = 0; j < nd; ++j) {
    const int row = disc.rows[static_cast<std::size_t>(j)];
    const int col = disc.cols[static_cast<std::size_t>(j)];
    kvals[j] = s12.point(row, col);
    v12[j] = s12.values(row, col);
    v21[j] = s21.values(row, col);
  }

  DbarM2Solution out;
  out.grid = zgrid;
  out.R = s12.R;
  out.fraction = s12.fraction;
  out.sigma_tag = s12.sigma_tag;
  out.M11.resize(zgrid.n, zgrid.n);
  out.M12.resize(zgrid.n, zgrid.n);
  out.M21.resize(zgrid.n, zgrid.n);
  out.M22.resize(zgrid.n, zgrid.n);

  VectorXcd rhs(2 * nd);
  rhs.head(nd).setOnes();
  rhs.tail(nd).setZero();

  const auto solve_pair = [&](const VectorXcd& mult1, const VectorXcd& mult2, VectorXcd& warm,
                              Complex z, const char* label) {
    const auto apply = [&](const VectorXcd& x) {
      MatrixXcd w1 = MatrixXcd::Zero(n, n);
      MatrixXcd w2 = MatrixXcd::Zero(n, n);
      for (int j = 0; j < nd; ++j) {
        const int row = disc.rows[static_cast<std::size_t>(j)];
        const int col = disc.cols[static_cast<std::size_t>(j)];
        const int r = disc.reflected[static_cast<std::size_t>(j)];
        w1(row, col) = mult1[j] * x[nd + r];
        w2(row, col) = mult2[j] * x[r];
      }
      const MatrixXcd c1 = plan.apply(w1);
      const MatrixXcd c2 = plan.apply(w2);
      VectorXcd y(2 * nd);
      for (int j = 0; j < nd; ++j) {
        const int row = disc.rows[static_cast<std::size_t>(j)];
        const int col = disc.cols[static_cast<std::size_t>(j)];
        y[j] = x[j] - c1(row, col);
        y[nd + j] = x[nd + j] - c2(row, col);
      }
      return y;
    };
    const VectorXcd* x0 = warm.size() == 2 * nd ? &warm : nullptr;
    const GmresResult<Complex> sol = gmres<Complex>(apply, rhs, options, x0);
    if (!sol.converged) raise_dbar_failure(label, z, sol.residual_history);
    warm = sol.x;
    out.max_iterations = std::max(out.max_iterations, sol.iterations);
    if (!sol.residual_history.empty()) {
      out.max_residual = std::max(out.max_residual, sol.residual_history.back());
    }
    return std::pair<Complex, Complex>(sol.x[disc.center], sol.x[nd + disc.center]);
  };

  VectorXcd warm_a, warm_b;
  VectorXcd mult_a(nd), mult_b(nd);
  for (int zrow = 0; zrow < zgrid.n; ++zrow) {
    for (int zcol = 0; zcol < zgrid.n; ++zcol) {
      const Complex z = zgrid.point(zrow, zcol);
      for (int j = 0; j < nd; ++j) {
        mult_a[j] = std::polar(1.0, -2.0 * (kvals[j] * z).real()) * v21[j];
        mult_b[j] = std::polar(1.0, 2.0 * (std::conj(kvals[j]) * z).real()) * v12[j];
      }
      const auto [m11, m12] = solve_pair(mult_a, mult_b, warm_a, z, "matrix inversion");
      const auto [m22, m21] = solve_pair(mult_b, mult_a, warm_b, z, "matrix inversion");
      out.M11(zrow, zcol) = m11;
      out.M12(zrow, zcol) = m12;
      out.M22(zrow, zcol) = m22;
      out.M21(zrow, zcol) = m21;
    }
  }
  out.Mplus = out.M11 + out.M12;
  out.Mminus = out.M22 + out.M21;
  return out;
}

namespace {

MatrixXcd spectral_derivative(const MatrixXcd& field, double period, bool conjugate_direction) {
  const int n = static_cast<int>(field.rows());
  MatrixXcd hat = fft2(field);
  for (int row = 0; row < n; ++row) {
    const int fr = row < n / 2 ? row : row - n;
    const double xi_y = 2.0 * kPi * fr / period;
    for (int col = 0; col < n; ++col) {
      const int fc = col < n / 2 ? col : col - n;
      const double xi_x = 2.0 * kPi * fc / period;
      const Complex factor = conjugate_direction ? 0.5 * Complex(-xi_y, xi_x)
                                                 : 0.5 * Complex(xi_y, xi_x);
      hat(row, col) *= factor;
    }
  }
  return ifft2(hat);
}

double taper_weight(double r) {
  if (r <= 0.92) return 1.0;
  if (r >= 1.02) return 0.0;
  return 0.5 * (1.0 + std::cos(kPi * (r - 0.92) / 0.1));
}

}  // namespace

Reconstruction recover_gamma(const DbarM2Solution& m) {
  const ZGrid& g = m.grid;
  const int n = g.n;
  MatrixXcd fplus(n, n), fminus(n, n);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      const Complex z = g.point(row, col);
      const Complex mp = m.Mplus(row, col);
      const Complex mm = m.Mminus(row, col);
      if (std::abs(mp) < 1e-8 || std::abs(mm) < 1e-8) {
        throw DivisionSingularityError(
            "summed CGO entry vanishes at z = " + format_complex(z), z);
      }
      const double w = taper_weight(std::abs(z));
      fplus(row, col) = 1.0 + w * (mp - 1.0);
      fminus(row, col) = 1.0 + w * (mm - 1.0);
    }
  }

  const double period = 2.0 * g.half;
  MatrixXcd q12 = spectral_derivative(fplus, period, true).cwiseQuotient(fminus);
  MatrixXcd q21 = spectral_derivative(fminus, period, false).cwiseQuotient(fplus);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      if (std::abs(g.point(row, col)) > 1.0) {
        q12(row, col) = Complex(0.0, 0.0);
        q21(row, col) = Complex(0.0, 0.0);
      }
    }
  }

  const AperiodicConvolution plan = cauchy_plan(n, g.h);
  const MatrixXcd p12 = plan.apply(q12.conjugate());
  const MatrixXcd p21 = plan.apply(q21);

  Reconstruction rec;
  rec.grid = g;
  rec.gamma_q12 = (-2.0 * p12.conjugate()).array().exp();
  rec.gamma_q21 = (-2.0 * p21).array().exp();
  rec.gamma = 0.5 * (rec.gamma_q12 + rec.gamma_q21);
  rec.method_tag = "matrix-cgo";
  rec.sigma_tag = m.sigma_tag;
  rec.fraction = m.fraction;
  rec.R = m.R;

  double max_re = -1e300, min_re = 1e300, imag_defect = 0.0;
  double num = 0.0, den = 0.0;
  Complex moment(0.0, 0.0);
  double mass = 0.0;
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      const Complex z = g.point(row, col);
      if (std::abs(z) > 1.0) continue;
      const Complex val = rec.gamma(row, col);
      max_re = std::max(max_re, val.real());
      min_re = std::min(min_re, val.real());
      imag_defect = std::max(imag_defect, std::abs(val.imag()));
      num += std::norm(rec.gamma_q12(row, col) - rec.gamma_q21(row, col));
      den += std::norm(val);
      const double pos = std::max(val.real() - 1.0, 0.0);
      moment += pos * z;
      mass += pos;
    }
  }
  rec.max_re = max_re;
  rec.min_re = min_re;
  rec.imag_defect = imag_defect;
  rec.consistency = den > 0.0 ? std::sqrt(num / den) : 0.0;
  rec.centroid = mass > 1e-12 ? Complex(moment.real() / mass, moment.imag() / mass)
                              : Complex(0.0, 0.0);
  return rec;
}

void save_reconstruction(const std::filesystem::path& stem, const Reconstruction& r) {
  std::filesystem::path matrix_file = stem;
  matrix_file += ".txt";
  write_matrix(matrix_file, r.gamma,
               {{"method", r.method_tag},
                {"sigma", r.sigma_tag},
                {"fraction", format_double(r.fraction)},
                {"R", format_double(r.R)},
                {"n", std::to_string(r.grid.n)},
                {"half", format_double(r.grid.half)}});
  KeyValueFile kv;
  kv.set("method", r.method_tag);
  kv.set("sigma", r.sigma_tag);
  kv.set_double("fraction", r.fraction);
  kv.set_double("R", r.R);
  kv.set_double("max_re", r.max_re);
  kv.set_double("min_re", r.min_re);
  kv.set_complex("centroid", r.centroid);
  kv.set_double("consistency", r.consistency);
  kv.set_double("imag_defect", r.imag_defect);
  std::filesystem::path metrics_file = stem;
  metrics_file += "_metrics.txt";
  write_key_value(metrics_file, kv);
}

}  // namespace pdeit
