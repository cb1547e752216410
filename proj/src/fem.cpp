#include "pdeit/fem.hpp"

#include "pdeit/io.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pdeit {

Eigen::SparseMatrix<double> assemble_stiffness(const ConductivityField& field,
                                               const FemMesh& mesh) {
  if (!field.real_valued) {
    throw std::invalid_argument("assemble_stiffness: field must be real-valued");
  }
  const int nv = mesh.num_vertices();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.num_triangles()) * 9);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const int v0 = mesh.triangles(t, 0);
    const int v1 = mesh.triangles(t, 1);
    const int v2 = mesh.triangles(t, 2);
    const Complex p0 = mesh.vertex(v0);
    const Complex p1 = mesh.vertex(v1);
    const Complex p2 = mesh.vertex(v2);
    const Complex centroid = (p0 + p1 + p2) / 3.0;
    const Complex sigma_c = field(centroid);
    if (!(sigma_c.real() > 0.0)) {
      throw std::domain_error("assemble_stiffness: nonpositive conductivity sample");
    }
    const double x0 = p0.real(), y0 = p0.imag();
    const double x1 = p1.real(), y1 = p1.imag();
    const double x2 = p2.real(), y2 = p2.imag();
    const double area2 = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
    if (!(area2 > 0.0)) {
      throw std::domain_error("assemble_stiffness: degenerate or inverted triangle");
    }
    const double b[3] = {y1 - y2, y2 - y0, y0 - y1};
    const double c[3] = {x2 - x1, x0 - x2, x1 - x0};
    const double scale = sigma_c.real() / (2.0 * area2);
    const int idx[3] = {v0, v1, v2};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        trips.emplace_back(idx[i], idx[j], scale * (b[i] * b[j] + c[i] * c[j]));
      }
    }
  }
  Eigen::SparseMatrix<double> a(nv, nv);
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

DirichletSolver::DirichletSolver(const ConductivityField& field, const FemMesh& mesh)
    : mesh_(&mesh), tag_(field.tag) {
  const int nv = mesh.num_vertices();
  nb_ = mesh.ring_size();
  ni_ = nv - nb_;
  interior_of_ = Eigen::VectorXi::Constant(nv, -1);
  ring_pos_ = Eigen::VectorXi::Constant(nv, -1);
  for (int l = 0; l < nb_; ++l) ring_pos_[mesh.ring[l]] = l;
  int next = 0;
  for (int v = 0; v < nv; ++v) {
    if (ring_pos_[v] == -1) interior_of_[v] = next++;
  }

  const Eigen::SparseMatrix<double> a = assemble_stiffness(field, mesh);
  std::vector<Eigen::Triplet<double>> ii, ib, bi, bb;
  for (int col = 0; col < a.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, col); it; ++it) {
      const int r = static_cast<int>(it.row());
      const int cc = static_cast<int>(it.col());
      const bool rb = ring_pos_[r] != -1;
      const bool cb = ring_pos_[cc] != -1;
      if (!rb && !cb) {
        ii.emplace_back(interior_of_[r], interior_of_[cc], it.value());
      } else if (!rb && cb) {
        ib.emplace_back(interior_of_[r], ring_pos_[cc], it.value());
      } else if (rb && !cb) {
        bi.emplace_back(ring_pos_[r], interior_of_[cc], it.value());
      } else {
        bb.emplace_back(ring_pos_[r], ring_pos_[cc], it.value());
      }
    }
  }
  Eigen::SparseMatrix<double> aii(ni_, ni_);
  aii.setFromTriplets(ii.begin(), ii.end());
  Aib_.resize(ni_, nb_);
  Aib_.setFromTriplets(ib.begin(), ib.end());
  Abi_.resize(nb_, ni_);
  Abi_.setFromTriplets(bi.begin(), bi.end());
  Abb_.resize(nb_, nb_);
  Abb_.setFromTriplets(bb.begin(), bb.end());
  ldlt_.compute(aii);
  if (ldlt_.info() != Eigen::Success) {
    throw std::runtime_error("DirichletSolver: interior stiffness factorization failed");
  }
}

VectorXd DirichletSolver::solve(const VectorXd& ring_values) const {
  if (ring_values.size() != nb_) {
    throw std::invalid_argument("DirichletSolver::solve: ring value size mismatch");
  }
  const VectorXd ui = ldlt_.solve(-(Aib_ * ring_values));
  VectorXd u(ni_ + nb_);
  for (int v = 0; v < ni_ + nb_; ++v) {
    u[v] = ring_pos_[v] != -1 ? ring_values[ring_pos_[v]] : ui[interior_of_[v]];
  }
  return u;
}

VectorXd DirichletSolver::weak_flux(const VectorXd& nodal_u) const {
  if (nodal_u.size() != ni_ + nb_) {
    throw std::invalid_argument("DirichletSolver::weak_flux: nodal size mismatch");
  }
  VectorXd ui(ni_), ub(nb_);
  for (int v = 0; v < ni_ + nb_; ++v) {
    if (ring_pos_[v] != -1) {
      ub[ring_pos_[v]] = nodal_u[v];
    } else {
      ui[interior_of_[v]] = nodal_u[v];
    }
  }
  return Abi_ * ui + Abb_ * ub;
}

VectorXd DirichletSolver::flux_density(const VectorXd& nodal_u) const {
  const VectorXd f = weak_flux(nodal_u);
  VectorXd density(nb_);
  for (int l = 0; l < nb_; ++l) {
    const Complex z = mesh_->vertex(mesh_->ring[l]);
    const Complex prev = mesh_->vertex(mesh_->ring[(l + nb_ - 1) % nb_]);
    const Complex next = mesh_->vertex(mesh_->ring[(l + 1) % nb_]);
    const double lumped = 0.5 * (std::abs(z - prev) + std::abs(next - z));
    density[l] = f[l] / lumped;
  }
  return density;
}

MatrixXd DirichletSolver::dn_from_data(const MatrixXd& ring_columns) const {
  if (ring_columns.rows() != nb_) {
    throw std::invalid_argument("DirichletSolver::dn_from_data: row count mismatch");
  }
  const MatrixXd ui = ldlt_.solve(-(Aib_ * ring_columns));
  const MatrixXd flux = Abi_ * ui + Abb_ * ring_columns;
  return flux.transpose() * ring_columns;
}

MatrixXd boundary_data_matrix(const HaarBasis& basis, int ring_size) {
  const int parent = basis.grid.parent_L;
  if (ring_size < parent || ring_size % parent != 0) {
    throw std::invalid_argument(
        "boundary_data_matrix: ring size must be a multiple of the parent grid length");
  }
  // The applied voltage is the fixed piecewise-linear interpolant in angle
  // of the wavelet cell values at the parent cell centers (zero off the
  // arc). Finer rings sample that one function, so the assembled map has a
  // mesh-independent continuum limit.
  const BoundaryGrid centers = boundary_grid(parent);
  const double to_function = 1.0 / std::sqrt(basis.grid.h);
  MatrixXd at_centers = MatrixXd::Zero(parent, basis.J);
  at_centers.middleRows(basis.grid.offset, basis.L) = basis.Phi * to_function;

  const BoundaryGrid ring = boundary_grid(ring_size);
  MatrixXd data(ring_size, basis.J);
  const double sp = centers.h;
  for (int l = 0; l < ring_size; ++l) {
    const double rel = (ring.theta[l] - centers.theta[0]) / sp;
    const double base = std::floor(rel);
    const double t = rel - base;
    const int c0 = (static_cast<int>(base) % parent + parent) % parent;
    const int c1 = (c0 + 1) % parent;
    data.row(l) = (1.0 - t) * at_centers.row(c0) + t * at_centers.row(c1);
  }
  return data;
}

DNMap assemble_dn(const DirichletSolver& solver, const HaarBasis& basis) {
  DNMap dn;
  dn.J = basis.J;
  dn.fraction = basis.arc.fraction;
  dn.sigma_tag = solver.sigma_tag();
  dn.matrix = solver.dn_from_data(boundary_data_matrix(basis, solver.ring_size()));
  return dn;
}

MatrixXd dn_fourier_reference(const HaarBasis& basis, int ring_size) {
  const MatrixXd data = boundary_data_matrix(basis, ring_size);
  const int L = ring_size;
  const BoundaryGrid ring = boundary_grid(L);
  const MatrixXcd data_c = data.cast<Complex>();
  MatrixXcd modes(L, basis.J);
  VectorXd weights(L);
  const int images = 64;
  for (int row = 0; row < L; ++row) {
    const int n0 = row - L / 2;
    VectorXcd e(L);
    for (int l = 0; l < L; ++l) e[l] = std::polar(1.0, -n0 * ring.theta[l]);
    modes.row(row) = (e.transpose() * data_c);
    const double s4 = std::pow(std::sin(n0 * kPi / L), 4.0);
    double sum = 0.0;
    for (int q = -images; q <= images; ++q) {
      const double n = static_cast<double>(n0) + static_cast<double>(q) * L;
      if (n != 0.0) sum += 1.0 / std::abs(n * n * n);
    }
    weights[row] = s4 * std::pow(static_cast<double>(L) / kPi, 4.0) * sum;
  }
  const MatrixXcd quad = modes.adjoint() * weights.asDiagonal() * modes;
  return (2.0 * kPi / (static_cast<double>(L) * L)) * quad.real();
}

void save_dn(const std::filesystem::path& file, const DNMap& dn) {
  write_matrix(file, dn.matrix,
               {{"J", std::to_string(dn.J)},
                {"fraction", format_double(dn.fraction)},
                {"sigma", dn.sigma_tag}});
}

DNMap load_dn(const std::filesystem::path& file) {
  const MatrixFile mf = read_matrix(file);
  DNMap dn;
  dn.matrix = mf.values.real();
  if (mf.values.imag().norm() != 0.0) {
    throw std::runtime_error("load_dn: matrix has nonzero imaginary part");
  }
  dn.J = std::stoi(mf.header.at("J"));
  dn.fraction = std::stod(mf.header.at("fraction"));
  dn.sigma_tag = mf.header.at("sigma");
  if (dn.matrix.rows() != dn.J || dn.matrix.cols() != dn.J) {
    throw std::runtime_error("load_dn: header J does not match matrix shape");
  }
  return dn;
}

}  // namespace pdeit
