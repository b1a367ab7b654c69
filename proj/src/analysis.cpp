#include "incisor/analysis.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "incisor/quadrature.hpp"

namespace incisor {

namespace {

constexpr int kEdgeQuadPointsPerSegment = 8;

/// int_strip w(xi) v(xi)^2 dxi by cell quadrature on the strip mesh.
double weighted_square_integral(const Eigenfunction2D& v,
                                const std::function<double(double, double)>& weight) {
  const Mesh& mesh = *v.grid.mesh;
  const FeSpace& space = *v.space;
  const SimplexQuadrature& quad = simplex_quadrature(2, 5);
  double total = 0.0;
  for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    const auto& p0 = mesh.vertices[cell[0]];
    const auto& p1 = mesh.vertices[cell[1]];
    const auto& p2 = mesh.vertices[cell[2]];
    const double area = mesh.cell_measure(c);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const double r = quad.points[q][0];
      const double s = quad.points[q][1];
      const std::array<double, 3> bary = {1.0 - r - s, r, s};
      const double x = bary[0] * p0[0] + bary[1] * p1[0] + bary[2] * p2[0];
      const double y = bary[0] * p0[1] + bary[1] * p1[1] + bary[2] * p2[1];
      const double val = space.eval_in_cell(v.coeffs, c, bary);
      total += quad.weights[q] * area * weight(x, y) * val * val;
    }
  }
  return total;
}

/// int_0^1 w(t) v(kappa1 t, t)^2 dt along the sharp edge. The trace of
/// v is only piecewise smooth, so the rule is composite over the mesh
/// segments of the edge; per segment the integrand is near-polynomial
/// and Gauss quadrature leaves the FE error dominant.
double edge_square_integral(const Eigenfunction2D& v, double kappa1,
                            const std::function<double(double)>& weight) {
  const SegmentQuadrature gl = gauss_legendre(kEdgeQuadPointsPerSegment);
  const std::vector<double>& t_nodes = v.grid.t_nodes;
  double total = 0.0;
  for (std::size_t seg = 0; seg + 1 < t_nodes.size(); ++seg) {
    const double t0 = t_nodes[seg];
    const double dt = t_nodes[seg + 1] - t0;
    for (int i = 0; i < kEdgeQuadPointsPerSegment; ++i) {
      const double t = t0 + dt * gl.points[i];
      const double val = v.value(kappa1 * t, t);
      total += dt * gl.weights[i] * weight(t) * val * val;
    }
  }
  return total;
}

void require_matching_eigenfunction(double alpha1, const Eigenfunction2D& v) {
  if (std::abs(v.grid.spec.alpha - alpha1) > 1e-12) {
    std::ostringstream msg;
    msg << "eigenfunction was computed for alpha=" << v.grid.spec.alpha
        << " but alpha1=" << alpha1 << " was requested";
    throw ValidationError(msg.str());
  }
}

void require_normalized(const Eigenfunction2D& v) {
  const double norm2 = weighted_square_integral(v, [](double, double) { return 1.0; });
  if (std::abs(norm2 - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "eigenfunction is not L2-normalized (||v||^2 = " << norm2 << ")";
    throw ValidationError(msg.str());
  }
}

std::string quadrature_provenance() {
  std::ostringstream s;
  s << "cells: degree-5 simplex rule; edge: composite " << kEdgeQuadPointsPerSegment
    << "-point Gauss-Legendre per mesh segment";
  return s.str();
}

} // namespace

double boundary_integral_IGamma1(const KappaPair& kappa, const Eigenfunction2D& v) {
  require_matching_eigenfunction(kappa.alpha1(), v);
  // In the rotated frame of the slanted face, the face is a pointed
  // strip and the integrand reduces along the sharp edge x_j = kappa_j x3:
  // nu.e3 dl = kappa1 dt, so
  //   I_Gamma1 = (tan(alpha2)/2) kappa1 int_0^1 v(kappa1 t, t)^2 dt.
  const double factor = 0.5 * std::tan(kappa.alpha2()) * kappa.kappa1;
  if (factor == 0.0) return 0.0;
  return factor * edge_square_integral(v, kappa.kappa1, [](double) { return 1.0; });
}

TrialReport trial_quotient_negative_kappa2(const KappaPair& kappa, double epsilon,
                                           const Eigenfunction2D& v) {
  if (!(kappa.kappa2 < 0.0)) {
    throw ValidationError("trial_quotient_negative_kappa2 requires kappa2 < 0");
  }
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  require_matching_eigenfunction(kappa.alpha1(), v);
  require_normalized(v);

  TrialReport report;
  report.kappa = kappa;
  report.epsilon = epsilon;
  // Tail half x2 > 0: the profile integrates to ||v||^2 int_0^inf
  // e^{-2 eps x2} dx2 = 1/(2 eps), leaving exactly eps/2; the quadrature
  // recomputation of ||v||^2 is folded in.
  const double norm2 = weighted_square_integral(v, [](double, double) { return 1.0; });
  report.plus_part = 0.5 * epsilon * norm2;
  report.I_Gamma1 = boundary_integral_IGamma1(kappa, v);
  report.quotient_gap = report.plus_part + report.I_Gamma1;
  report.negative = report.quotient_gap < 0.0;
  report.epsilon_star = report.I_Gamma1 < 0.0 ? 0.9 * (-2.0 * report.I_Gamma1) : 0.0;
  report.quadrature = quadrature_provenance();
  return report;
}

TrialReport trial_quotient_symmetric(double kappa1, double epsilon, const Eigenfunction2D& v) {
  if (!(kappa1 > 0.0)) throw ValidationError("trial_quotient_symmetric requires kappa1 > 0");
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  require_matching_eigenfunction(std::atan(kappa1), v);
  require_normalized(v);

  TrialReport report;
  report.kappa = KappaPair(kappa1, kappa1);
  report.epsilon = epsilon;
  // Half-domain x1 > x2 with psi = e^{-eps x1} v(x2, x3). The volume
  // pieces reduce to weighted strip integrals of v^2 (both O(epsilon)):
  //   -(eps/2) int e^{-2 eps xi1} v^2   from the cross-section residual,
  //   +2 eps   int e^{-2 eps xi1} v^2   from the bisector-plane terms,
  // and the sharp edge contributes with nu.e1 < 0:
  //   -(1/2) int_0^1 e^{-2 eps kappa1 t} v(kappa1 t, t)^2 dt.
  const double weighted = weighted_square_integral(
      v, [epsilon](double x, double) { return std::exp(-2.0 * epsilon * x); });
  report.volume_term = 1.5 * epsilon * weighted;
  report.edge_term = -0.5 * edge_square_integral(v, kappa1, [epsilon, kappa1](double t) {
    return std::exp(-2.0 * epsilon * kappa1 * t);
  });
  report.quotient_gap = report.volume_term + report.edge_term;
  report.negative = report.quotient_gap < 0.0;
  const double edge_at_zero = 0.5 * edge_square_integral(v, kappa1, [](double) { return 1.0; });
  report.epsilon_star = 0.9 * edge_at_zero / 1.5;
  report.quadrature = quadrature_provenance();
  return report;
}

double tau1_prime(double alpha1, const Eigenfunction2D& v) {
  if (!(alpha1 > 0.0 && alpha1 < M_PI / 2.0)) {
    throw ValidationError("tau1_prime requires alpha1 in (0, pi/2)");
  }
  require_matching_eigenfunction(alpha1, v);
  // (1/2) cos(alpha1) int_L v^2 dl with dl = dt / cos(alpha1) along
  // xi1 = t tan(alpha1).
  return 0.5 * edge_square_integral(v, std::tan(alpha1), [](double) { return 1.0; });
}

double pullback_quotient_bound(const KappaPair& kappa, double epsilon,
                               const IncisorSolution& solution) {
  if (!(kappa.kappa2 > 0.0)) {
    throw ValidationError("pullback_quotient_bound requires kappa2 > 0");
  }
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (solution.eigen.values.empty()) throw ValidationError("solution carries no eigenpairs");

  // Stretching x2 by (kappa2+eps)/kappa2 maps the eigenfunction onto the
  // widened domain; the common factor (kappa2+eps)/kappa2 cancels from
  // the quotient and the x2 energy picks up the square contraction:
  //   quotient = (kappa2/(kappa2+eps))^2 E_2 + E_1 + E_3  <=  lambda_1.
  const Eigen::VectorXd u_full = expand_free_vector(
      *solution.space, solution.pair, solution.eigen.vectors.col(0));
  const std::array<double, 3> energy = directional_energies(*solution.space, u_full);
  const double mass = solution.eigen.vectors.col(0).dot(
      solution.pair.M * solution.eigen.vectors.col(0));
  const double contraction = kappa.kappa2 / (kappa.kappa2 + epsilon);
  return (contraction * contraction * energy[1] + energy[0] + energy[2]) / mass;
}

} // namespace incisor
