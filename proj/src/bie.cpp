#include "pdeit/bie.hpp"

#include "pdeit/io.hpp"

#include <sstream>

namespace pdeit {

std::string trace_kind_name(TraceKind kind) {
  switch (kind) {
    case TraceKind::Psi:
      return "psi";
    case TraceKind::U1:
      return "u1";
    case TraceKind::U2:
      return "u2";
  }
  throw std::invalid_argument("unknown trace kind");
}

Complex incident_field(TraceKind kind, Complex z, Complex k) {
  switch (kind) {
    case TraceKind::Psi:
      return std::exp(kI * k * z);
    case TraceKind::U1:
      if (k == Complex(0.0, 0.0)) throw ExcludedFrequencyError("incident field undefined at k = 0");
      return std::exp(kI * k * z) / (kI * k);
    case TraceKind::U2:
      if (k == Complex(0.0, 0.0)) throw ExcludedFrequencyError("incident field undefined at k = 0");
      return std::exp(-kI * k * std::conj(z)) / (-kI * k);
  }
  throw std::invalid_argument("unknown trace kind");
}

Kernel trace_kernel(TraceKind kind) {
  return kind == TraceKind::U2 ? Kernel::Conjugated : Kernel::Standard;
}

namespace {

void validate_system_inputs(const DNMap& dn, const HaarBasis& basis, const KernelMatrix& kernel) {
  if (dn.J != basis.J) {
    throw std::invalid_argument("map difference and wavelet family sizes disagree");
  }
  if (kernel.values.rows() != basis.L || kernel.values.cols() != basis.L) {
    throw std::invalid_argument("kernel matrix does not match the arc grid");
  }
  if (dn.fraction != basis.arc.fraction) {
    throw std::invalid_argument("map difference and wavelet family cover different arcs");
  }
}

}  // namespace

BieSystem build_bie_system(const DNMap& dn, const HaarBasis& basis, const KernelMatrix& kernel) {
  validate_system_inputs(dn, basis, kernel);
  BieSystem sys;
  sys.k = kernel.k;
  sys.variant = kernel.variant;
  sys.scale = basis.grid.h;
  const MatrixXcd phi = basis.Phi.cast<Complex>();
  sys.A = sys.scale * (phi.transpose() * (kernel.values * phi)) * dn.matrix.cast<Complex>();
  return sys;
}

TraceResult solve_trace(TraceKind kind, const DNMap& dn, const HaarBasis& basis,
                        const KernelMatrix& kernel, Complex k, const GmresOptions& options) {
  if (k == Complex(0.0, 0.0)) {
    throw ExcludedFrequencyError("trace equations exclude k = 0");
  }
  if (kernel.variant != trace_kernel(kind)) {
    throw std::invalid_argument("kernel variant does not match the trace kind");
  }
  if (kernel.k != k) {
    throw std::invalid_argument("kernel frequency does not match the requested k");
  }
  validate_system_inputs(dn, basis, kernel);

  VectorXcd incident(basis.L);
  for (int l = 0; l < basis.L; ++l) {
    incident[l] = incident_field(kind, basis.grid.z[l], k);
  }
  const VectorXcd c = analyze(basis, incident);

  const MatrixXcd phi = basis.Phi.cast<Complex>();
  const MatrixXcd dnc = dn.matrix.cast<Complex>();
  const double scale = basis.grid.h;
  const auto apply = [&phi, &dnc, &kernel, scale](const VectorXcd& b) {
    const VectorXcd action = phi * (dnc * b);
    return VectorXcd(b + scale * (phi.transpose() * (kernel.values * action)));
  };
  const GmresResult<Complex> sol = gmres<Complex>(apply, c, options);
  if (!sol.converged) {
    std::ostringstream msg;
    msg << "trace system for " << trace_kind_name(kind) << " did not converge: residual "
        << (sol.residual_history.empty() ? 1.0 : sol.residual_history.back()) << " after "
        << sol.iterations << " iterations";
    throw IllConditionedSystemError(msg.str(), sol.residual_history);
  }

  TraceResult out;
  out.kind = kind;
  out.k = k;
  out.fraction = basis.arc.fraction;
  out.coefficients = sol.x;
  out.trace = synthesize(basis, sol.x);
  out.iterations = sol.iterations;
  out.residual = sol.residual_history.empty() ? 0.0 : sol.residual_history.back();
  return out;
}

VectorXcd psi_offdiagonal(int which, const DNMap& dn, const HaarBasis& basis,
                          const TraceResult& u_trace, const KernelMatrix& kernel) {
  if (which != 12 && which != 21) {
    throw std::invalid_argument("off-diagonal index must be 12 or 21");
  }
  const TraceKind want_kind = which == 12 ? TraceKind::U2 : TraceKind::U1;
  const Kernel want_variant = which == 12 ? Kernel::Cauchy : Kernel::CauchyConjugate;
  if (u_trace.kind != want_kind) {
    throw std::invalid_argument("off-diagonal trace requires the complementary u trace");
  }
  if (kernel.variant != want_variant) {
    throw std::invalid_argument("kernel variant does not match the off-diagonal index");
  }
  if (kernel.k != u_trace.k) {
    throw std::invalid_argument("kernel and u trace frequencies disagree");
  }
  if (dn.J != basis.J || u_trace.trace.size() != basis.L ||
      kernel.values.rows() != basis.L) {
    throw std::invalid_argument("off-diagonal quadrature inputs have mismatched sizes");
  }
  return VectorXcd(basis.grid.h * (kernel.values * dn_action(dn, basis, u_trace.trace)));
}

VectorXcd dn_action(const DNMap& dn, const HaarBasis& basis, const VectorXcd& trace) {
  if (dn.J != basis.J || trace.size() != basis.L) {
    throw std::invalid_argument("map action inputs have mismatched sizes");
  }
  const VectorXcd coeffs = analyze(basis, trace);
  return synthesize(basis, VectorXcd(dn.matrix.cast<Complex>() * coeffs));
}

namespace {

std::string complex_list(const std::vector<Complex>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ';';
    out += format_complex(values[i]);
  }
  return out;
}

std::string double_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ';';
    out += format_double(values[i]);
  }
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ';')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

void save_trace_set(const std::filesystem::path& file, const TraceSet& set) {
  if (set.traces.cols() != static_cast<Eigen::Index>(set.ks.size())) {
    throw std::invalid_argument("trace set has one column per frequency");
  }
  std::vector<std::pair<std::string, std::string>> header;
  header.emplace_back("kind", set.kind);
  header.emplace_back("fraction", format_double(set.fraction));
  header.emplace_back("sigma", set.sigma_tag);
  header.emplace_back("k", complex_list(set.ks));
  header.emplace_back("residual", double_list(set.residuals));
  write_matrix(file, set.traces, header);
}

TraceSet load_trace_set(const std::filesystem::path& file) {
  const MatrixFile data = read_matrix(file);
  TraceSet set;
  set.traces = data.values;
  const auto find = [&data, &file](const std::string& key) -> const std::string& {
    const auto it = data.header.find(key);
    if (it == data.header.end()) {
      throw std::runtime_error(file.string() + ": missing trace header " + key);
    }
    return it->second;
  };
  set.kind = find("kind");
  set.fraction = std::stod(find("fraction"));
  set.sigma_tag = find("sigma");
  for (const std::string& tok : split_list(find("k"))) set.ks.push_back(parse_complex(tok));
  for (const std::string& tok : split_list(find("residual"))) set.residuals.push_back(std::stod(tok));
  if (set.traces.cols() != static_cast<Eigen::Index>(set.ks.size())) {
    throw std::runtime_error(file.string() + ": trace column count does not match k list");
  }
  return set;
}

}  // namespace pdeit
