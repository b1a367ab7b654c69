#pragma once

#include <string>

#include "incisor/spectral2d.hpp"
#include "incisor/spectral3d.hpp"

namespace incisor {

/// Rayleigh-quotient decomposition of an analytic trial function. The
/// pieces reduce to 1D/2D quadratures of the planar eigenfunction v, so
/// this module never assembles 3D matrices and serves as an independent
/// check on the 3D solver.
struct TrialReport {
  KappaPair kappa{0.0, 0.0};
  double epsilon = 0.0;
  double plus_part = 0.0;    // exponential-tail contribution, equals epsilon/2
  double I_Gamma1 = 0.0;     // boundary integral over the slanted face
  double volume_term = 0.0;  // O(epsilon) bisector terms (symmetric trial only)
  double edge_term = 0.0;    // edge integral along the sharp edge (symmetric trial only)
  double quotient_gap = 0.0; // ||grad psi||^2 - lambda ||psi||^2 (signed)
  double epsilon_star = 0.0; // gap certified negative for 0 < epsilon < epsilon_star
  bool negative = false;     // quotient_gap < 0
  std::string quadrature;    // provenance of the quadratures used
};

/// Trial function e^{-eps x2} v(x1, x3) for kappa2 < 0: the tail
/// contributes epsilon/2 exactly and the slanted face contributes
/// I_Gamma1 < 0, so the gap goes negative for small epsilon, certifying
/// a trapped mode below the threshold.
TrialReport trial_quotient_negative_kappa2(const KappaPair& kappa, double epsilon,
                                           const Eigenfunction2D& v);

/// Boundary integral over the slanted face Gamma1, reduced to the sharp
/// edge: (tan(alpha2)/2) int_L v^2 nu.e3 dl. Sign matches sign(kappa2).
double boundary_integral_IGamma1(const KappaPair& kappa, const Eigenfunction2D& v);

/// Symmetric trial function e^{-eps x1} v(x2, x3) on the half-domain
/// x1 > x2 for kappa1 = kappa2 > 0. The bisector-plane reduction yields
/// O(epsilon) volume terms plus a strictly negative edge term.
TrialReport trial_quotient_symmetric(double kappa1, double epsilon, const Eigenfunction2D& v);

/// Perturbation coefficient tau1' = (1/2) cos(alpha1) int_L v^2 dl with
/// the edge parametrized by arc length; strictly positive. Drives the
/// absence-of-eigenvalues estimate for small positive kappa2.
double tau1_prime(double alpha1, const Eigenfunction2D& v);

/// Rayleigh quotient of the stretched trial u(x1, kappa2 x2/(kappa2+eps), x3)
/// on the widened domain, evaluated through the closed-form factor
/// identities from the energy split of u. Always <= lambda1(kappa).
double pullback_quotient_bound(const KappaPair& kappa, double epsilon,
                               const IncisorSolution& solution);

} // namespace incisor
