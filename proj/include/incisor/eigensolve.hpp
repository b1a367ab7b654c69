#pragma once

#include <vector>

#include <Eigen/Dense>

#include "incisor/fem.hpp"

namespace incisor {

/// Result of a generalized symmetric eigensolve K u = lambda M u.
/// Values ascend; vectors are M-orthonormal with the entry of largest
/// magnitude positive; residuals are ||K u - lambda M u||_2 / ||u||_M.
struct EigenSolveResult {
  std::vector<double> values;
  Eigen::MatrixXd vectors; // n_free x n_pairs, column i pairs with values[i]
  std::vector<double> residuals;
  int iterations = 0; // total Lanczos steps (0 for the dense path)
};

/// k smallest eigenpairs by shift-invert Lanczos (shift 0): Krylov
/// iteration on K^{-1} M in the M-inner product with one sparse
/// factorization of K, full reorthogonalization, and restarts with
/// deflation of converged pairs.
EigenSolveResult smallest_eigenpairs(const AssembledPair& pair, int k, double tol = 1e-9);

/// Full-spectrum dense reference: Cholesky reduction of M followed by a
/// dense symmetric eigensolve. Independent of the Lanczos path; capped
/// at 4000 free dofs.
EigenSolveResult dense_oracle(const AssembledPair& pair);

} // namespace incisor
