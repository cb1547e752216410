#pragma once

#include "pdeit/errors.hpp"
#include "pdeit/faddeev.hpp"
#include "pdeit/fem.hpp"
#include "pdeit/gmres.hpp"
#include "pdeit/haar.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace pdeit {

/// The three trace families solved on the boundary. Psi is the scalar CGO
/// trace; U1 and U2 are the two first-order-system traces.
enum class TraceKind { Psi, U1, U2 };

std::string trace_kind_name(TraceKind kind);

/// Closed-form incident field: e^{ikz} for Psi, e^{ikz}/(ik) for U1,
/// e^{-ik conj(z)}/(-ik) for U2. Throws at k = 0 for U1/U2.
Complex incident_field(TraceKind kind, Complex z, Complex k);

/// Kernel variant the second-kind equation of each kind integrates against.
Kernel trace_kernel(TraceKind kind);

/// Discretized second-kind system (I + A) b = c in wavelet coefficients,
/// A = scale * Phi^T G_k Phi dLambda with scale = arclength / L.
struct BieSystem {
  Complex k;
  Kernel variant = Kernel::Standard;
  double scale = 0.0;
  MatrixXcd A;
};

/// Assemble A from a map difference, the wavelet family on the arc, and a
/// kernel matrix sampled on the same grid. Throws std::invalid_argument on
/// any size or metadata mismatch.
BieSystem build_bie_system(const DNMap& dn, const HaarBasis& basis, const KernelMatrix& kernel);

struct TraceResult {
  TraceKind kind = TraceKind::Psi;
  Complex k;
  double fraction = 1.0;
  VectorXcd trace;         // values at the arc grid nodes
  VectorXcd coefficients;  // wavelet coefficients b
  int iterations = 0;
  double residual = 0.0;
};

/// Solve (I + A) b = c for the trace of the given kind at frequency k.
/// dn must hold the difference of voltage-to-current maps (zero for the
/// homogeneous field), and the kernel variant must match the kind.
/// Restarted Krylov iteration with the pinned defaults; non-convergence
/// raises IllConditionedSystemError with the residual history.
TraceResult solve_trace(TraceKind kind, const DNMap& dn, const HaarBasis& basis,
                        const KernelMatrix& kernel, Complex k,
                        const GmresOptions& options = GmresOptions{});

/// Off-diagonal first-order-system traces by midpoint quadrature of a
/// Cauchy-type kernel against the boundary action of the map difference.
/// which = 12 consumes a U2 trace (plain Cauchy kernel), which = 21 a U1
/// trace (conjugated Cauchy kernel). Throws std::invalid_argument when the
/// pairing, the kernel variant, or the frequencies disagree.
VectorXcd psi_offdiagonal(int which, const DNMap& dn, const HaarBasis& basis,
                          const TraceResult& u_trace, const KernelMatrix& kernel);

/// Boundary action of the map difference on a trace through its wavelet
/// coefficients: synthesize(dn * analyze(trace)).
VectorXcd dn_action(const DNMap& dn, const HaarBasis& basis, const VectorXcd& trace);

/// A family of traces of one kind over a list of frequencies, stored as
/// one column per frequency on the arc grid.
struct TraceSet {
  std::string kind;
  double fraction = 1.0;
  std::string sigma_tag;
  std::vector<Complex> ks;
  MatrixXcd traces;
  std::vector<double> residuals;
};

/// Matrix text with the frequency list, kind, fraction, phantom tag, and
/// solver residuals in the header.
void save_trace_set(const std::filesystem::path& file, const TraceSet& set);
TraceSet load_trace_set(const std::filesystem::path& file);

}  // namespace pdeit
