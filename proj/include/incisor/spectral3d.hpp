#pragma once

#include <optional>
#include <string>
#include <vector>

#include "incisor/eigensolve.hpp"
#include "incisor/geometry.hpp"
#include "incisor/spectral2d.hpp"

namespace incisor {

/// Discretization knobs for the 3D problem on the truncated incisor.
/// n3 counts cells across the layer thickness; n1/n2 <= 0 are sized
/// automatically from (R, kappa1, n3, grading) only, so every point of a
/// kappa2 sweep shares the same unit-cube discretization structure.
/// margin <= 0 requests the automatic detection margin
/// max(R-doubling truncation estimate, 0.002 pi^2).
struct Numerics3D {
  double R1 = 6.0;
  double R2 = 6.0;
  int n3 = 10;
  int n1 = 0;
  int n2 = 0;
  int order = 2;
  double grading = 1.15;
  ArtificialBc artificial_bc = ArtificialBc::Neumann;
  int k = 5;
  double tol = 1e-9;
  double margin = 0.0;
  Numerics2D threshold; // numerics of the 2D threshold solve
};

/// Outcome of one 3D solve: the k smallest eigenvalues of the truncated
/// problem, the threshold lambda_dagger, and the classification of
/// eigenvalues sitting below lambda_dagger - margin as discrete-spectrum
/// candidates.
struct SpectrumReport {
  KappaPair kappa{0.0, 0.0};
  double lambda_dagger = 0.0;
  double margin = 0.0;
  std::vector<double> eigenvalues; // ascending, all k requested
  std::vector<double> residuals;
  std::vector<bool> below;         // eigenvalue < lambda_dagger - margin
  bool undecided = false;          // smallest eigenvalue within +-margin of the threshold
  std::string warning;

  // numerics provenance
  double R1 = 0.0, R2 = 0.0;
  int n1 = 0, n2 = 0, n3 = 0, order = 0;
  ArtificialBc artificial_bc = ArtificialBc::Neumann;

  int count_below() const;
  std::optional<double> lambda1() const; // smallest below-threshold eigenvalue
};

SpectrumReport solve_incisor(const KappaPair& kappa, const Numerics3D& num = {});

/// Convenience handle: the eigenvectors and FE space of a solve, for
/// export and for trial-function pullbacks.
struct IncisorSolution {
  SpectrumReport report;
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const FeSpace> space;
  AssembledPair pair;
  EigenSolveResult eigen;
};

IncisorSolution solve_incisor_full(const KappaPair& kappa, const Numerics3D& num = {});

struct SweepResult {
  double kappa1 = 0.0;
  std::vector<double> kappa2;
  std::vector<SpectrumReport> reports; // ordered by grid index
};

/// Per-point solve over a kappa2 grid on meshes generated from the same
/// unit-cube resolution. `workers` bounds the number of concurrent
/// solves; results are ordered by grid index regardless of completion.
SweepResult sweep_kappa2(double kappa1, const std::vector<double>& kappa2_grid,
                         const Numerics3D& num = {}, int workers = 1);

struct FindHResult {
  double h = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int solves = 0;
  Numerics3D numerics;
};

/// Bisection on the below-threshold flag over kappa2 in `bracket`.
/// The low end must classify as empty and the high end as non-empty.
/// The result is a discretization-dependent estimate of the transition
/// point h(kappa1).
FindHResult find_h(double kappa1, std::pair<double, double> bracket, double tol_kappa2,
                   const Numerics3D& num = {});

/// Number of eigenvalues below lambda_dagger - margin, growing the
/// request until the first value above the threshold appears.
int count_discrete(const KappaPair& kappa, const Numerics3D& num = {});

struct DirichletAbsenceReport {
  KappaPair kappa{0.0, 0.0};
  std::vector<double> R_values;
  std::vector<double> lambda1; // per R, all-Dirichlet problem
  bool all_above_pi2 = false;  // lambda1 >= pi^2 (1 - 0.001)
  bool nonincreasing = false;
};

/// All-Dirichlet check: with Dirichlet on every boundary piece the
/// truncated-domain eigenvalues cannot fall below pi^2 (domain
/// monotonicity), so values below pi^2 indicate a solver or mesh bug.
/// Reports the trend over the given truncation radii (applied to both
/// R1 and R2).
DirichletAbsenceReport dirichlet_absence_check(const KappaPair& kappa,
                                               const std::vector<double>& R_values,
                                               const Numerics3D& num = {});

} // namespace incisor
