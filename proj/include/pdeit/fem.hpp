#pragma once

#include "pdeit/geometry.hpp"
#include "pdeit/haar.hpp"
#include "pdeit/mesh.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <filesystem>
#include <string>

namespace pdeit {

// P1 stiffness matrix with the conductivity sampled at triangle centroids.
// Throws std::domain_error if the sampled conductivity is not strictly
// positive and std::invalid_argument for complex-valued fields.
Eigen::SparseMatrix<double> assemble_stiffness(const ConductivityField& field,
                                               const FemMesh& mesh);

// Factorizes the interior block of the stiffness matrix once; each solve
// extends given boundary ring values harmonically with respect to the
// conductivity, and the flux members evaluate the conormal derivative in
// weak form (never by pointwise gradient sampling).
class DirichletSolver {
 public:
  DirichletSolver(const ConductivityField& field, const FemMesh& mesh);

  // ring_values[l] prescribes u at ring node l; returns u at every vertex.
  VectorXd solve(const VectorXd& ring_values) const;

  // F[l] = integral of sigma grad(u) . grad(hat_l), the weak flux paired
  // against the boundary hat function at ring node l.
  VectorXd weak_flux(const VectorXd& nodal_u) const;

  // Pointwise flux estimate at ring nodes: weak flux divided by the lumped
  // boundary mass of each hat function.
  VectorXd flux_density(const VectorXd& nodal_u) const;

  // dn(m, n) = <flux of column m, column n> for boundary data columns given
  // as nodal ring values; equals G^T S G with S the boundary Schur
  // complement, so it is symmetric up to solver roundoff.
  MatrixXd dn_from_data(const MatrixXd& ring_columns) const;

  int ring_size() const { return nb_; }
  const std::string& sigma_tag() const { return tag_; }

 private:
  const FemMesh* mesh_;
  std::string tag_;
  Eigen::VectorXi interior_of_;
  Eigen::VectorXi ring_pos_;
  Eigen::SparseMatrix<double> Aib_;
  Eigen::SparseMatrix<double> Abi_;
  Eigen::SparseMatrix<double> Abb_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
  int ni_ = 0;
  int nb_ = 0;
};

struct DNMap {
  MatrixXd matrix;
  int J = 0;
  double fraction = 1.0;
  std::string sigma_tag;
};

// Nodal boundary values of every basis function on the uniform ring of
// ring_size nodes: each ring node takes the value of the wavelet on the
// grid cell containing its angle, zero off the arc. ring_size must be a
// positive multiple of the parent grid length.
MatrixXd boundary_data_matrix(const HaarBasis& basis, int ring_size);

DNMap assemble_dn(const DirichletSolver& solver, const HaarBasis& basis);

// Analytic reference for the homogeneous-disc map: applies the Fourier
// multiplier |n| to the piecewise-linear interpolants of the same boundary
// data columns on the same ring. Exact up to image-sum truncation, so FEM
// output converges to it under mesh refinement.
MatrixXd dn_fourier_reference(const HaarBasis& basis, int ring_size);

void save_dn(const std::filesystem::path& file, const DNMap& dn);
DNMap load_dn(const std::filesystem::path& file);

}  // namespace pdeit
