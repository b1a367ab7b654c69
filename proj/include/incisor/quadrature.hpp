#pragma once

#include <array>
#include <vector>

namespace incisor {

/// Quadrature rule on the reference simplex (triangle with vertices
/// (0,0),(1,0),(0,1) or tetrahedron (0,0,0),(1,0,0),(0,1,0),(0,0,1)).
/// Points are reference coordinates; weights sum to 1 and are applied as
/// w * |cell|.
struct SimplexQuadrature {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  std::size_t size() const { return weights.size(); }
};

/// Symmetric rule exact for polynomials of degree >= `degree` on affine
/// simplices. Available degrees: 2 and 5 (triangles and tetrahedra).
const SimplexQuadrature& simplex_quadrature(int dim, int degree);

/// Gauss-Legendre rule on [0,1] with n points (exact to degree 2n-1).
struct SegmentQuadrature {
  std::vector<double> points;
  std::vector<double> weights; // sum to 1
};
SegmentQuadrature gauss_legendre(int n);

} // namespace incisor
