#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "incisor/geometry.hpp"

namespace incisor {

/// Lagrange P1/P2 space on a simplicial mesh. Dofs sit at vertices (P1)
/// plus edge midpoints (P2) and are numbered lexicographically by node
/// coordinates so runs are reproducible. dirichlet_mask is true exactly
/// for dofs on DirichletSigma facets, plus Artificial facets when the
/// artificial condition is Dirichlet.
struct FeSpace {
  std::shared_ptr<const Mesh> mesh;
  int order = 1;
  ArtificialBc artificial_bc = ArtificialBc::Dirichlet;

  std::vector<std::array<double, 3>> dof_coords;
  std::vector<int> cell_dofs; // n_cells * dofs_per_cell, row-major
  std::vector<char> dirichlet_mask;
  std::vector<int> vertex_dof; // mesh vertex -> dof index

  int dofs_per_cell() const;
  std::size_t n_dofs() const { return dof_coords.size(); }
  std::size_t n_free() const;

  const int* cell_dof_row(std::size_t c) const { return cell_dofs.data() + c * dofs_per_cell(); }

  /// Value of the FE function with coefficients `u` (all dofs) at a
  /// point inside cell `c`, given as the full barycentric triple in 2D
  /// or the reference simplex coordinates in 3D.
  double eval_in_cell(const Eigen::VectorXd& u, std::size_t c,
                      const std::array<double, 3>& bary) const;
};

FeSpace build_space(std::shared_ptr<const Mesh> mesh, int order, ArtificialBc artificial_bc);

/// Stiffness/mass pair on the free (non-Dirichlet) dofs. Dirichlet dofs
/// are eliminated by row/column deletion, keeping both matrices SPD.
struct AssembledPair {
  Eigen::SparseMatrix<double> K;
  Eigen::SparseMatrix<double> M;
  std::vector<int> free_dofs; // free index -> global dof index
};

AssembledPair assemble(const FeSpace& space);

/// Scatter a free-dof vector back to all dofs (Dirichlet entries zero).
Eigen::VectorXd expand_free_vector(const FeSpace& space, const AssembledPair& pair,
                                   const Eigen::VectorXd& free_values);

/// Per-coordinate energy split: integrals of (d u / d x_j)^2 over the
/// mesh, j = 0..dim-1, for the FE function with coefficients `u`.
std::array<double, 3> directional_energies(const FeSpace& space, const Eigen::VectorXd& u);

} // namespace incisor
