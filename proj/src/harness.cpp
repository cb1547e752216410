#include "pdeit/harness.hpp"

#include "pdeit/ls.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pdeit {

namespace {

template <typename F>
auto stage(const std::string& tag, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw std::runtime_error("stage " + tag + " failed: " + e.what());
  }
}

std::string fraction_tag(double f) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "f%03d", static_cast<int>(std::lround(f * 100.0)));
  return buf;
}

std::string radius_tag(double R) {
  std::string s = "R" + format_double(R);
  for (char& ch : s) {
    if (ch == '.') ch = 'p';
  }
  return s;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw std::invalid_argument("config key " + key + " lists no values");
  return out;
}

std::vector<Complex> parse_complex_list(const std::string& text, const std::string& key) {
  std::vector<Complex> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_complex(tok));
  if (out.empty()) throw std::invalid_argument("config key " + key + " lists no values");
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format_double(v[i]);
  }
  return s;
}

std::string join_complex(const std::vector<Complex>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format_complex(v[i]);
  }
  return s;
}

void set_common_header(KeyValueFile& m, const ExperimentConfig& c, int test) {
  m.set_int("test", test);
  m.set("phantom", c.phantom);
  m.set_double("amplitude", c.amplitude);
  m.set_complex("center", c.center);
  m.set_double("rho", c.rho);
  m.set_int("L", c.L);
  m.set_int("refine", c.refine);
  m.set_int("method", c.method);
  m.set("fractions", join_doubles(c.fractions));
  m.set_int("seed", c.seed);
}

struct ArcSetup {
  double fraction = 1.0;
  HaarBasis basis;
  DNMap delta;
};

ArcSetup make_arc_setup(const DirichletSolver& sigma_solver, const DirichletSolver& one_solver,
                        const BoundaryGrid& parent, double fraction) {
  auto [arc, sub] = arc_subset(parent, fraction);
  const int J = static_cast<int>(std::lround(parent.L * fraction));
  ArcSetup s;
  s.fraction = fraction;
  s.basis = build_haar(arc, J, sub);
  DNMap a = assemble_dn(sigma_solver, s.basis);
  DNMap b = assemble_dn(one_solver, s.basis);
  a.matrix -= b.matrix;
  s.delta = std::move(a);
  return s;
}

std::string write_trace_curve(const std::filesystem::path& dir, const std::string& name,
                              const BoundaryGrid& grid, const VectorXcd& trace) {
  MatrixXd curve(grid.L, 3);
  for (int l = 0; l < grid.L; ++l) {
    curve(l, 0) = grid.theta[l];
    curve(l, 1) = trace[l].real();
    curve(l, 2) = trace[l].imag();
  }
  write_matrix(dir / name, curve, {{"columns", "theta,re,im"}});
  return name;
}

TraceSet sweep_traces(TraceKind kind, const DNMap& dn, const HaarBasis& basis, double R,
                      double dk) {
  auto ks = scattering_frequencies(R, dk);
  TraceSet set;
  set.kind = trace_kind_name(kind);
  set.fraction = dn.fraction;
  set.sigma_tag = dn.sigma_tag;
  set.ks = ks;
  set.traces.resize(basis.L, static_cast<Eigen::Index>(ks.size()));
  set.residuals.resize(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    auto kern = kernel_matrix(basis.grid, ks[i], trace_kernel(kind));
    auto r = solve_trace(kind, dn, basis, kern, ks[i]);
    set.traces.col(static_cast<Eigen::Index>(i)) = r.trace;
    set.residuals[i] = r.residual;
  }
  return set;
}

struct SolveStats {
  int max_iterations = 0;
  double max_residual = 0.0;

  void absorb(int iterations, double residual) {
    max_iterations = std::max(max_iterations, iterations);
    max_residual = std::max(max_residual, residual);
  }
  void absorb(const TraceSet& set) {
    for (double r : set.residuals) max_residual = std::max(max_residual, r);
  }
};

MatrixXd image_rows_top_down(const MatrixXd& field) { return field.colwise().reverse(); }

constexpr double kGammaImageLo = 0.85;
constexpr double kGammaImageHi = 1.45;
constexpr double kDataImageLo = -0.6;
constexpr double kDataImageHi = 0.6;
constexpr double kResidualGate = 1e-8;

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& file) {
  const KeyValueFile kv = read_key_value(file);
  static const std::vector<std::string> allowed = {
      "phantom", "amplitude", "center",  "rho",    "fractions",  "L",
      "refine",  "method",    "k_list",  "u_trace_k", "R_list", "dk_list",
      "zgrid_n", "zgrid_half", "seed",   "out"};
  for (const auto& [key, value] : kv.entries) {
    bool known = false;
    for (const auto& a : allowed) known = known || a == key;
    if (!known) throw std::invalid_argument("unknown config key " + key);
  }

  ExperimentConfig c;
  c.phantom = kv.get_or("phantom", c.phantom);
  if (c.phantom == "disc") {
    c.amplitude = 1.0;
    c.center = Complex(-0.3, 0.2);
    c.rho = 0.25;
  }
  c.amplitude = kv.get_double("amplitude", c.amplitude);
  c.center = kv.get_complex("center", c.center);
  c.rho = kv.get_double("rho", c.rho);
  if (kv.has("fractions")) c.fractions = parse_double_list(kv.get("fractions"), "fractions");
  c.L = kv.get_int("L", c.L);
  c.refine = kv.get_int("refine", c.refine);
  c.method = kv.get_int("method", c.method);
  if (kv.has("k_list")) c.trace_ks = parse_complex_list(kv.get("k_list"), "k_list");
  c.u_trace_k = kv.get_complex("u_trace_k", c.u_trace_k);
  if (kv.has("R_list")) c.R_list = parse_double_list(kv.get("R_list"), "R_list");
  if (kv.has("dk_list")) c.dk_list = parse_double_list(kv.get("dk_list"), "dk_list");
  c.zgrid_n = kv.get_int("zgrid_n", c.zgrid_n);
  c.zgrid_half = kv.get_double("zgrid_half", c.zgrid_half);
  c.seed = kv.get_int("seed", static_cast<int>(c.seed));
  if (kv.has("out")) c.out = kv.get("out");
  return c;
}

ConductivityField config_phantom(const ExperimentConfig& c) {
  if (c.phantom == "homogeneous") return phantom_homogeneous();
  if (c.phantom == "c2") return phantom_c2(c.amplitude, c.center, c.rho);
  if (c.phantom == "disc") return phantom_discontinuous(c.amplitude, c.center, c.rho);
  throw std::invalid_argument("unknown phantom tag " + c.phantom);
}

void validate_config(const ExperimentConfig& c, int test) {
  if (test != 1 && test != 2) throw std::invalid_argument("test must be 1 or 2");
  if (c.phantom != "c2" && c.phantom != "disc" && c.phantom != "homogeneous") {
    throw std::invalid_argument("unknown phantom tag " + c.phantom);
  }
  if (test == 1 && c.method != 1) {
    throw std::invalid_argument("the trace experiment requires method = 1");
  }
  if (test == 2 && c.method != 2) {
    throw std::invalid_argument("the reconstruction experiment requires method = 2");
  }
  if (test == 1 && c.phantom == "disc") {
    throw std::invalid_argument(
        "the trace experiment needs a twice-differentiable or homogeneous phantom");
  }
  if (test == 2 && c.phantom == "c2") {
    throw std::invalid_argument(
        "the reconstruction experiment needs the discontinuous or homogeneous phantom");
  }
  if (c.phantom != "homogeneous") {
    try {
      config_phantom(c);
    } catch (const std::exception& e) {
      throw std::invalid_argument(e.what());
    }
  }

  boundary_grid(c.L);
  if (c.refine < 2 || c.refine > 7) {
    throw std::invalid_argument("mesh refinement must lie in [2, 7]");
  }
  if ((4 << c.refine) % c.L != 0) {
    throw std::invalid_argument("mesh boundary ring " + std::to_string(4 << c.refine) +
                                " does not subdivide the measurement grid L = " +
                                std::to_string(c.L));
  }
  if (c.fractions.empty()) throw std::invalid_argument("fractions list is empty");
  for (double f : c.fractions) {
    if (!(f > 0.0) || f > 1.0) throw std::invalid_argument("fractions must lie in (0, 1]");
    const double jf = f * c.L;
    if (std::abs(jf - std::lround(jf)) > 1e-9 || std::lround(jf) % 2 != 0) {
      throw std::invalid_argument("fraction " + format_double(f) +
                                  " does not give an even wavelet count at L = " +
                                  std::to_string(c.L));
    }
  }
  for (std::size_t i = 0; i < c.fractions.size(); ++i) {
    for (std::size_t j = i + 1; j < c.fractions.size(); ++j) {
      if (fraction_tag(c.fractions[i]) == fraction_tag(c.fractions[j])) {
        throw std::invalid_argument("fractions produce duplicate tags");
      }
    }
  }

  if (test == 1) {
    if (c.trace_ks.empty()) throw std::invalid_argument("k_list is empty");
    for (const Complex& k : c.trace_ks) {
      if (std::abs(k) < 1e-12) throw std::invalid_argument("k_list entries must be nonzero");
    }
  } else {
    if (std::abs(c.u_trace_k) < 1e-12) throw std::invalid_argument("u_trace_k must be nonzero");
    if (c.R_list.empty()) throw std::invalid_argument("R_list is empty");
    if (c.R_list.size() != c.dk_list.size()) {
      throw std::invalid_argument("R_list and dk_list must pair up");
    }
    for (std::size_t i = 0; i < c.R_list.size(); ++i) {
      make_scattering_grid(ScatteringKind::T, c.R_list[i], c.dk_list[i]);
    }
    make_zgrid(c.zgrid_n, c.zgrid_half);
  }
  if (c.seed < 0) throw std::invalid_argument("seed must be nonnegative");
  if (c.out.empty()) throw std::invalid_argument("output directory is empty");
}

MetricsReport run_trace_comparison(const ExperimentConfig& c) {
  validate_config(c, 1);
  const ConductivityField field = config_phantom(c);
  std::filesystem::create_directories(c.out);

  KeyValueFile m;
  set_common_header(m, c, 1);
  m.set("k_list", join_complex(c.trace_ks));

  const FemMesh mesh = stage("mesh", [&] { return build_disc_mesh(c.refine); });
  const BoundaryGrid parent = boundary_grid(c.L);
  const DirichletSolver sigma_solver(field, mesh);
  const DirichletSolver one_solver(phantom_homogeneous(), mesh);

  const ArcSetup full = stage("dn-assembly f100", [&] {
    return make_arc_setup(sigma_solver, one_solver, parent, 1.0);
  });
  std::vector<ArcSetup> partial;
  for (double f : c.fractions) {
    if (f >= 1.0) continue;
    partial.push_back(stage("dn-assembly " + fraction_tag(f), [&] {
      return make_arc_setup(sigma_solver, one_solver, parent, f);
    }));
  }

  const PotentialGrid pg = stage("potential", [&] { return schrodinger_potential(field); });

  SolveStats stats;
  std::ostringstream table;
  table << "# relative trace errors\n# k fraction reference error\n";

  for (std::size_t ik = 0; ik < c.trace_ks.size(); ++ik) {
    const Complex k = c.trace_ks[ik];
    const std::string ktag = "k" + std::to_string(ik);
    m.set(ktag, format_complex(k));

    const LsSolution vol = stage("oracle " + ktag, [&] { return lippmann_schwinger(pg, k); });
    const VectorXcd oracle = oracle_trace(vol, parent);
    m.set("file_trace_oracle_" + ktag,
          write_trace_curve(c.out, "trace_oracle_" + ktag + ".txt", parent, oracle));

    const TraceResult full_trace = stage("trace f100 " + ktag, [&] {
      auto kern = kernel_matrix(full.basis.grid, k, trace_kernel(TraceKind::Psi));
      return solve_trace(TraceKind::Psi, full.delta, full.basis, kern, k);
    });
    stats.absorb(full_trace.iterations, full_trace.residual);
    m.set("file_trace_full_" + ktag,
          write_trace_curve(c.out, "trace_full_" + ktag + ".txt", parent, full_trace.trace));

    const double err_oracle = (full_trace.trace - oracle).norm() / oracle.norm();
    m.set_double("err_oracle_" + ktag, err_oracle);
    table << format_complex(k) << " 1 volume-oracle " << format_double(err_oracle) << "\n";

    for (const ArcSetup& p : partial) {
      const std::string ftag = fraction_tag(p.fraction);
      const TraceResult part = stage("trace " + ftag + " " + ktag, [&] {
        auto kern = kernel_matrix(p.basis.grid, k, trace_kernel(TraceKind::Psi));
        return solve_trace(TraceKind::Psi, p.delta, p.basis, kern, k);
      });
      stats.absorb(part.iterations, part.residual);
      m.set("file_trace_" + ftag + "_" + ktag,
            write_trace_curve(c.out, "trace_" + ftag + "_" + ktag + ".txt", p.basis.grid,
                              part.trace));

      const VectorXcd full_on_arc = full_trace.trace.segment(p.basis.grid.offset, p.basis.L);
      const double err = (part.trace - full_on_arc).norm() / full_on_arc.norm();
      m.set_double("err_" + ftag + "_" + ktag, err);
      table << format_complex(k) << " " << format_double(p.fraction) << " full-arc "
            << format_double(err) << "\n";
    }
  }

  {
    std::ofstream os(c.out / "errors.txt");
    os << table.str();
  }
  m.set("file_errors", "errors.txt");
  m.set_int("bie_max_iterations", stats.max_iterations);
  m.set_double("bie_max_residual", stats.max_residual);

  const bool pass = stats.max_residual <= kResidualGate;
  m.set("residual_check", pass ? "pass" : "fail");

  MetricsReport report;
  report.manifest = m;
  report.manifest_file = c.out / "manifest.txt";
  report.checks_pass = pass;
  write_key_value(report.manifest_file, m);
  return report;
}

MetricsReport run_reconstruction(const ExperimentConfig& c) {
  validate_config(c, 2);
  const ConductivityField field = config_phantom(c);
  std::filesystem::create_directories(c.out);

  KeyValueFile m;
  set_common_header(m, c, 2);
  m.set_complex("u_trace_k", c.u_trace_k);
  m.set("R_list", join_doubles(c.R_list));
  m.set("dk_list", join_doubles(c.dk_list));
  m.set_int("zgrid_n", c.zgrid_n);
  m.set_double("zgrid_half", c.zgrid_half);
  m.set_double("pgm_gamma_lo", kGammaImageLo);
  m.set_double("pgm_gamma_hi", kGammaImageHi);
  m.set_double("pgm_data_lo", kDataImageLo);
  m.set_double("pgm_data_hi", kDataImageHi);
  m.set("pgm_row0", "imag_max");

  const FemMesh mesh = stage("mesh", [&] { return build_disc_mesh(c.refine); });
  const BoundaryGrid parent = boundary_grid(c.L);
  const DirichletSolver sigma_solver(field, mesh);
  const DirichletSolver one_solver(phantom_homogeneous(), mesh);

  std::vector<ArcSetup> setups;
  for (double f : c.fractions) {
    setups.push_back(stage("dn-assembly " + fraction_tag(f), [&] {
      return make_arc_setup(sigma_solver, one_solver, parent, f);
    }));
  }

  SolveStats bie_stats;
  SolveStats inversion_stats;

  for (const ArcSetup& s : setups) {
    const std::string ftag = fraction_tag(s.fraction);
    for (TraceKind kind : {TraceKind::U1, TraceKind::U2}) {
      const std::string name = trace_kind_name(kind);
      const TraceResult r = stage("display-trace " + name + " " + ftag, [&] {
        auto kern = kernel_matrix(s.basis.grid, c.u_trace_k, trace_kernel(kind));
        return solve_trace(kind, s.delta, s.basis, kern, c.u_trace_k);
      });
      bie_stats.absorb(r.iterations, r.residual);
      m.set("file_utrace_" + name + "_" + ftag,
            write_trace_curve(c.out, "utrace_" + name + "_" + ftag + ".txt", s.basis.grid,
                              r.trace));
    }
  }

  std::ostringstream table;
  table << "# reconstruction summary\n# R fraction max_re min_re contrast centroid "
           "consistency imag_defect\n";

  for (std::size_t ir = 0; ir < c.R_list.size(); ++ir) {
    const double R = c.R_list[ir];
    const double dk = c.dk_list[ir];
    const std::string rtag = radius_tag(R);

    for (const ArcSetup& s : setups) {
      const std::string ftag = fraction_tag(s.fraction);
      const std::string cell = rtag + "_" + ftag;

      const TraceSet su1 = stage("sweep u1 " + cell,
                                 [&] { return sweep_traces(TraceKind::U1, s.delta, s.basis, R, dk); });
      const TraceSet su2 = stage("sweep u2 " + cell,
                                 [&] { return sweep_traces(TraceKind::U2, s.delta, s.basis, R, dk); });
      bie_stats.absorb(su1);
      bie_stats.absorb(su2);

      auto grids = stage("transform " + cell, [&] {
        auto [s12, s21] = scattering_S(s.delta, s.basis, su1, su2, R, dk);
        return std::make_pair(interpolate_to_zero(s12), interpolate_to_zero(s21));
      });
      const ScatteringGrid& s12 = grids.first;
      const ScatteringGrid& s21 = grids.second;

      save_scattering_grid(c.out / ("s12_" + cell + ".txt"), s12);
      save_scattering_grid(c.out / ("s21_" + cell + ".txt"), s21);
      m.set("file_s12_" + cell, "s12_" + cell + ".txt");
      m.set("file_s21_" + cell, "s21_" + cell + ".txt");

      write_pgm(c.out / ("s21_re_" + cell + ".pgm"), image_rows_top_down(s21.values.real()),
                kDataImageLo, kDataImageHi);
      write_pgm(c.out / ("s21_im_" + cell + ".pgm"), image_rows_top_down(s21.values.imag()),
                kDataImageLo, kDataImageHi);
      m.set("file_s21_re_image_" + cell, "s21_re_" + cell + ".pgm");
      m.set("file_s21_im_image_" + cell, "s21_im_" + cell + ".pgm");

      const DbarM2Solution inv = stage("inversion " + cell, [&] {
        return dbar_solve_m2(s12, s21, make_zgrid(c.zgrid_n, c.zgrid_half));
      });
      inversion_stats.absorb(inv.max_iterations, inv.max_residual);

      const Reconstruction rec = stage("recovery " + cell, [&] { return recover_gamma(inv); });
      save_reconstruction(c.out / ("recon_" + cell), rec);
      m.set("file_recon_" + cell, "recon_" + cell + ".txt");
      m.set("file_recon_metrics_" + cell, "recon_" + cell + "_metrics.txt");

      write_pgm(c.out / ("recon_" + cell + ".pgm"), image_rows_top_down(rec.gamma.real()),
                kGammaImageLo, kGammaImageHi);
      m.set("file_recon_image_" + cell, "recon_" + cell + ".pgm");

      m.set_double("max_re_" + cell, rec.max_re);
      m.set_double("min_re_" + cell, rec.min_re);
      m.set_complex("centroid_" + cell, rec.centroid);
      m.set_double("consistency_" + cell, rec.consistency);
      m.set_double("imag_defect_" + cell, rec.imag_defect);
      m.set_int("m2_iterations_" + cell, inv.max_iterations);
      m.set_double("m2_residual_" + cell, inv.max_residual);

      table << format_double(R) << " " << format_double(s.fraction) << " "
            << format_double(rec.max_re) << " " << format_double(rec.min_re) << " "
            << format_double(rec.max_re - rec.min_re) << " " << format_complex(rec.centroid)
            << " " << format_double(rec.consistency) << " " << format_double(rec.imag_defect)
            << "\n";
    }
  }

  {
    std::ofstream os(c.out / "table.txt");
    os << table.str();
  }
  m.set("file_table", "table.txt");
  m.set_int("bie_max_iterations", bie_stats.max_iterations);
  m.set_double("bie_max_residual", bie_stats.max_residual);
  m.set_int("inversion_max_iterations", inversion_stats.max_iterations);
  m.set_double("inversion_max_residual", inversion_stats.max_residual);

  const bool pass =
      bie_stats.max_residual <= kResidualGate && inversion_stats.max_residual <= kResidualGate;
  m.set("residual_check", pass ? "pass" : "fail");

  MetricsReport report;
  report.manifest = m;
  report.manifest_file = c.out / "manifest.txt";
  report.checks_pass = pass;
  write_key_value(report.manifest_file, m);
  return report;
}

}  // namespace pdeit
