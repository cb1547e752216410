#include "pdeit/scattering.hpp"

#include "pdeit/io.hpp"

#include <Eigen/QR>

#include <cmath>

namespace pdeit {

namespace {

int nodes_per_side(double R, double dk) {
  if (!(R > 0.0) || !(dk > 0.0)) {
    throw std::invalid_argument("frequency grid needs positive R and dk");
  }
  const double ratio = R / dk;
  const int m = static_cast<int>(std::lround(ratio));
  if (m < 1 || std::abs(ratio - m) > 1e-9) {
    throw std::invalid_argument("R must be an integer multiple of dk");
  }
  return 2 * m + 1;
}

int trace_column(const TraceSet& set, Complex k) {
  for (std::size_t i = 0; i < set.ks.size(); ++i) {
    if (std::abs(set.ks[i] - k) <= 1e-9) return static_cast<int>(i);
  }
  throw std::invalid_argument("no trace supplied for frequency " + format_complex(k));
}

void validate_trace_set(const TraceSet& set, TraceKind kind, const DNMap& dn,
                        const HaarBasis& basis) {
  if (set.kind != trace_kind_name(kind)) {
    throw std::invalid_argument("trace set kind " + set.kind + " does not match " +
                                trace_kind_name(kind));
  }
  if (std::abs(set.fraction - dn.fraction) > 1e-12 ||
      std::abs(basis.arc.fraction - dn.fraction) > 1e-12) {
    throw std::invalid_argument("trace set, map difference, and wavelet family cover "
                                "different arcs");
  }
  if (set.traces.rows() != basis.L) {
    throw std::invalid_argument("trace set rows do not match the arc grid");
  }
}

TraceResult column_as_trace(const TraceSet& set, TraceKind kind, int col) {
  TraceResult t;
  t.kind = kind;
  t.k = set.ks[static_cast<std::size_t>(col)];
  t.fraction = set.fraction;
  t.trace = set.traces.col(col);
  return t;
}

}  // namespace

std::string scattering_kind_name(ScatteringKind kind) {
  switch (kind) {
    case ScatteringKind::T:
      return "t";
    case ScatteringKind::S12:
      return "s12";
    case ScatteringKind::S21:
      return "s21";
  }
  throw std::invalid_argument("unknown scattering kind");
}

ScatteringGrid make_scattering_grid(ScatteringKind kind, double R, double dk) {
  ScatteringGrid g;
  g.kind = kind;
  g.R = R;
  g.dk = dk;
  g.values = MatrixXcd::Zero(nodes_per_side(R, dk), nodes_per_side(R, dk));
  return g;
}

std::vector<Complex> scattering_frequencies(double R, double dk) {
  const ScatteringGrid g = make_scattering_grid(ScatteringKind::T, R, dk);
  std::vector<Complex> ks;
  for (int row = 0; row < g.n(); ++row) {
    for (int col = 0; col < g.n(); ++col) {
      const Complex k = g.point(row, col);
      if (g.in_disc(row, col) && std::abs(k) >= 0.1) ks.push_back(k);
    }
  }
  return ks;
}

ScatteringGrid scattering_t(const DNMap& dn, const HaarBasis& basis, const TraceSet& psi,
                            double R, double dk) {
  validate_trace_set(psi, TraceKind::Psi, dn, basis);
  ScatteringGrid out = make_scattering_grid(ScatteringKind::T, R, dk);
  out.sigma_tag = dn.sigma_tag;
  out.fraction = dn.fraction;
  const BoundaryGrid& grid = basis.grid;
  for (int row = 0; row < out.n(); ++row) {
    for (int col = 0; col < out.n(); ++col) {
      const Complex k = out.point(row, col);
      if (!out.in_disc(row, col) || std::abs(k) < 0.1) continue;
      const VectorXcd action =
          dn_action(dn, basis, psi.traces.col(trace_column(psi, k)));
      Complex acc(0.0, 0.0);
      for (int l = 0; l < basis.L; ++l) {
        acc += std::exp(kI * std::conj(k) * std::conj(grid.z[l])) * action[l];
      }
      out.values(row, col) = grid.h * acc;
    }
  }
  return out;
}

std::pair<ScatteringGrid, ScatteringGrid> scattering_S(const DNMap& dn, const HaarBasis& basis,
                                                       const TraceSet& u1, const TraceSet& u2,
                                                       double R, double dk) {
  validate_trace_set(u1, TraceKind::U1, dn, basis);
  validate_trace_set(u2, TraceKind::U2, dn, basis);
  ScatteringGrid s12 = make_scattering_grid(ScatteringKind::S12, R, dk);
  ScatteringGrid s21 = make_scattering_grid(ScatteringKind::S21, R, dk);
  s12.sigma_tag = dn.sigma_tag;
  s21.sigma_tag = dn.sigma_tag;
  s12.fraction = dn.fraction;
  s21.fraction = dn.fraction;
  const BoundaryGrid& grid = basis.grid;
  const double weight = grid.h / (2.0 * kPi);
  for (int row = 0; row < s12.n(); ++row) {
    for (int col = 0; col < s12.n(); ++col) {
      const Complex k = s12.point(row, col);
      if (!s12.in_disc(row, col) || std::abs(k) < 0.1) continue;
      const VectorXcd psi12 =
          psi_offdiagonal(12, dn, basis, column_as_trace(u2, TraceKind::U2, trace_column(u2, k)),
                          kernel_matrix(grid, k, Kernel::Cauchy));
      const VectorXcd psi21 =
          psi_offdiagonal(21, dn, basis, column_as_trace(u1, TraceKind::U1, trace_column(u1, k)),
                          kernel_matrix(grid, k, Kernel::CauchyConjugate));
      Complex acc12(0.0, 0.0);
      Complex acc21(0.0, 0.0);
      for (int l = 0; l < basis.L; ++l) {
        const Complex nu(std::cos(grid.theta[l]), std::sin(grid.theta[l]));
        acc12 += std::exp(-kI * std::conj(k) * grid.z[l]) * psi12[l] * nu;
        acc21 += std::exp(kI * std::conj(k) * std::conj(grid.z[l])) * psi21[l] * std::conj(nu);
      }
      s12.values(row, col) = kI * weight * acc12;
      s21.values(row, col) = -kI * weight * acc21;
    }
  }
  return {std::move(s12), std::move(s21)};
}

ScatteringGrid interpolate_to_zero(const ScatteringGrid& s) {
  std::vector<std::pair<int, int>> fit_nodes;
  for (int row = 0; row < s.n(); ++row) {
    for (int col = 0; col < s.n(); ++col) {
      if (!s.in_disc(row, col)) continue;
      const double r = std::abs(s.point(row, col));
      if (r >= 0.1 && r <= 0.5) fit_nodes.emplace_back(row, col);
    }
  }
  if (fit_nodes.size() < 6) {
    throw std::invalid_argument("too few nodes in the fit annulus 0.1 <= |k| <= 0.5");
  }
  MatrixXcd vand(static_cast<int>(fit_nodes.size()), 6);
  VectorXcd rhs(static_cast<int>(fit_nodes.size()));
  for (std::size_t i = 0; i < fit_nodes.size(); ++i) {
    const auto [row, col] = fit_nodes[i];
    const Complex k = s.point(row, col);
    const double k1 = k.real(), k2 = k.imag();
    const int r = static_cast<int>(i);
    vand(r, 0) = 1.0;
    vand(r, 1) = k1;
    vand(r, 2) = k2;
    vand(r, 3) = k1 * k1;
    vand(r, 4) = k1 * k2;
    vand(r, 5) = k2 * k2;
    rhs[r] = s.values(row, col);
  }
  const VectorXcd coef = vand.colPivHouseholderQr().solve(rhs);
  ScatteringGrid out = s;
  for (int row = 0; row < s.n(); ++row) {
    for (int col = 0; col < s.n(); ++col) {
      const Complex k = s.point(row, col);
      if (std::abs(k) >= 0.1) continue;
      const double k1 = k.real(), k2 = k.imag();
      out.values(row, col) = coef[0] + coef[1] * k1 + coef[2] * k2 + coef[3] * k1 * k1 +
                             coef[4] * k1 * k2 + coef[5] * k2 * k2;
    }
  }
  return out;
}

void save_scattering_grid(const std::filesystem::path& file, const ScatteringGrid& s) {
  write_matrix(file, s.values,
               {{"kind", scattering_kind_name(s.kind)},
                {"R", format_double(s.R)},
                {"dk", format_double(s.dk)},
                {"sigma", s.sigma_tag},
                {"fraction", format_double(s.fraction)}});
}

ScatteringGrid load_scattering_grid(const std::filesystem::path& file) {
  const MatrixFile mf = read_matrix(file);
  const auto need = [&mf, &file](const std::string& key) -> const std::string& {
    const auto it = mf.header.find(key);
    if (it == mf.header.end()) {
      throw std::invalid_argument(file.string() + " is missing header key " + key);
    }
    return it->second;
  };
  ScatteringGrid g;
  const std::string kind = need("kind");
  if (kind == "t") {
    g.kind = ScatteringKind::T;
  } else if (kind == "s12") {
    g.kind = ScatteringKind::S12;
  } else if (kind == "s21") {
    g.kind = ScatteringKind::S21;
  } else {
    throw std::invalid_argument(file.string() + " has unknown scattering kind " + kind);
  }
  g.R = std::stod(need("R"));
  g.dk = std::stod(need("dk"));
  g.sigma_tag = need("sigma");
  g.fraction = std::stod(need("fraction"));
  g.values = mf.values;
  if (g.values.rows() != g.values.cols() || g.values.rows() != nodes_per_side(g.R, g.dk)) {
    throw std::invalid_argument(file.string() + " matrix shape does not match R and dk");
  }
  return g;
}

}  // namespace pdeit
