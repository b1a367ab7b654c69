#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "incisor/eigensolve.hpp"
#include "incisor/fem.hpp"
#include "incisor/geometry.hpp"

namespace incisor {

/// Discretization knobs for the planar problem on the truncated pointed
/// strip. ny counts cells across the layer thickness; nx <= 0 picks the
/// number of cells along the strip automatically so the cell nearest the
/// slanted edge matches the thickness cells under the grading.
struct Numerics2D {
  double R = 12.0;
  int ny = 40;
  int nx = 0;
  int order = 2;
  double grading = 1.1;   // toward the slanted edge
  double grading_t = 1.0; // toward xi2 = 1 (resolves the corner there)
  ArtificialBc artificial_bc = ArtificialBc::Dirichlet;
  double tol = 1e-9;
};

/// First eigenfunction of the planar problem, normalized to unit L2 norm
/// and positive in the interior. Keeps the structured grid so values can
/// be interpolated at arbitrary points of the strip.
struct Eigenfunction2D {
  StripMeshData grid;
  std::shared_ptr<const FeSpace> space;
  Eigen::VectorXd coeffs; // all dofs, Dirichlet entries zero
  double mu1 = 0.0;

  double value(double xi1, double xi2) const;

  /// L2 norm of the cross-section xi2 -> v(xi1, xi2).
  double section_norm(double xi1, int n_quad = 32) const;
};

struct ThresholdSample {
  double alpha = 0.0;
  double mu1 = 0.0;
  double R = 0.0;
  int nx = 0;
  int ny = 0;
  int order = 0;
  double residual = 0.0;
  std::shared_ptr<const Eigenfunction2D> eigenfunction;
};

/// Smallest eigenvalue mu1 of the mixed problem on the truncated strip
/// (Dirichlet on xi2 in {0,1}, Neumann on the slanted edge, the
/// configured condition on xi1 = R), with its normalized eigenfunction.
ThresholdSample mu1(double alpha, const Numerics2D& num = {});

/// mu1 sampled over strictly increasing angles.
std::vector<ThresholdSample> threshold_curve(const std::vector<double>& alphas,
                                             const Numerics2D& num = {});

/// Essential spectrum threshold lambda_dagger = mu1(arctan kappa1).
/// Closed form pi^2 for kappa1 = 0. Results are cached per (alpha,
/// numerics) key so parameter sweeps stay deterministic and cheap.
double lambda_dagger(const KappaPair& kappa, const Numerics2D& num = {});

/// Same solve with the threshold eigenfunction attached (cache-backed).
ThresholdSample lambda_dagger_sample(const KappaPair& kappa, const Numerics2D& num = {});

/// Smallest eigenvalue of the strip truncated at xi1 = R with a Dirichlet
/// cut. Negative angles are handled via the reflection symmetry
/// mu1(-alpha) = mu1(alpha).
double mu1_truncated(double alpha2, double R, const Numerics2D& num = {});

/// Exponential decay rate of v along the strip, fitted as the
/// least-squares slope of log ||v(xi1, .)|| over cross-sections in the
/// far half of the truncated strip. Requires mu1 < pi^2.
double decay_rate(const Eigenfunction2D& v, double mu1_value);

} // namespace incisor
