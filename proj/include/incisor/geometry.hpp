#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "incisor/errors.hpp"

namespace incisor {

/// Boundary facet classification. DirichletSigma marks the horizontal
/// faces (x3 = 0 or x3 = 1) carrying the homogeneous Dirichlet condition,
/// NeumannPhys the slanted physical faces, Artificial the truncation faces
/// introduced to make the domain bounded.
enum class BoundaryTag : int {
  DirichletSigma = 1,
  NeumannPhys = 2,
  Artificial = 3,
};

/// Boundary condition imposed on the Artificial (truncation) facets.
enum class ArtificialBc { Dirichlet, Neumann };

/// Geometry parameters kappa = (kappa1, kappa2) of the chamfered
/// quarter-layer. kappa1 >= 0 and |kappa2| <= kappa1; other inputs are
/// rejected. The derived chamfer angles are alpha_j = arctan(kappa_j).
struct KappaPair {
  double kappa1;
  double kappa2;

  KappaPair(double k1, double k2);

  double alpha1() const { return std::atan(kappa1); }
  double alpha2() const { return std::atan(kappa2); }
};

/// Truncated pointed strip
///   { xi : xi1 > xi2 tan(alpha), 0 < xi2 < 1, xi1 < R }.
/// The layer thickness is the unit of length, so R > tan(alpha) is
/// required for a nonempty domain (area R - tan(alpha)/2).
struct StripSpec {
  double alpha = 0.0;                                  // slant angle in [0, pi/2)
  double R = 12.0;                                     // truncation abscissa
  ArtificialBc artificial_bc = ArtificialBc::Dirichlet;
  double grading = 1.0;                                // cell-size ratio toward the slanted edge, >= 1
  double grading_t = 1.0;                              // algebraic exponent refining toward xi2 = 1, >= 1

  void validate() const;
};

/// Truncated chamfered quarter-layer (incisor)
///   { x : kappa1 x3 < x1 < R1, kappa2 x3 < x2 < R2, 0 < x3 < 1 }.
/// Volume R1 R2 - (kappa1 R2 + kappa2 R1)/2 + kappa1 kappa2 / 3.
/// dirichlet_everywhere switches the slanted faces from Neumann to
/// Dirichlet (used by the all-Dirichlet absence check).
struct IncisorSpec {
  KappaPair kappa{0.0, 0.0};
  double R1 = 6.0;
  double R2 = 6.0;
  ArtificialBc artificial_bc = ArtificialBc::Neumann;
  bool dirichlet_everywhere = false;
  double grading = 1.0;

  void validate() const;
};

struct BoundaryFacet {
  std::array<int, 3> vertices; // vertices[2] == -1 for 2D edges
  BoundaryTag tag;
};

/// Conforming simplicial mesh (triangles in 2D, tetrahedra in 3D) with
/// tagged boundary facets. Cells are positively oriented; facet tags
/// cover exactly the boundary and partition it. Immutable after
/// construction and safe to share across threads.
struct Mesh {
  int dim = 2;
  std::vector<std::array<double, 3>> vertices; // third coordinate 0 in 2D
  std::vector<std::array<int, 4>> cells;       // cells[c][3] == -1 in 2D
  std::vector<BoundaryFacet> boundary_facets;

  int vertices_per_cell() const { return dim + 1; }
  std::size_t n_vertices() const { return vertices.size(); }
  std::size_t n_cells() const { return cells.size(); }

  /// Signed area/volume of a cell under the stored vertex order.
  double cell_measure(std::size_t c) const;
  double total_measure() const;
};

/// Breakpoints of a graded subdivision of [0,1] into n cells whose widths
/// grow geometrically by `grading` away from 0. grading == 1 is uniform.
std::vector<double> graded_breakpoints(int n, double grading);

/// Breakpoints (i/n)^beta: algebraic refinement toward 0 with the far
/// cells staying O(1/n). Suits corner singularities.
std::vector<double> power_breakpoints(int n, double beta);

/// Structured strip mesh plus the parameter-space grid it came from.
/// The grid is kept so that finite element fields on the mesh can be
/// evaluated at arbitrary points by inverting the mapping analytically.
struct StripMeshData {
  std::shared_ptr<const Mesh> mesh;
  StripSpec spec;
  std::vector<double> s_nodes; // breakpoints along the strip axis
  std::vector<double> t_nodes; // breakpoints across the thickness

  int nx() const { return static_cast<int>(s_nodes.size()) - 1; }
  int ny() const { return static_cast<int>(t_nodes.size()) - 1; }

  /// Vertex index of grid node (i, j), i in [0,nx], j in [0,ny].
  int vertex_index(int i, int j) const { return j * (nx() + 1) + i; }

  std::array<double, 3> map_point(double s, double t) const;

  /// Locate the physical point (xi1, xi2) and return its cell index and
  /// barycentric coordinates. Throws ValidationError if outside the mesh
  /// by more than a small tolerance.
  void locate(double xi1, double xi2, int& cell, std::array<double, 3>& bary) const;
};

StripMeshData build_strip(const StripSpec& spec, int nx, int ny);
Mesh build_strip_mesh(const StripSpec& spec, int nx, int ny);

Mesh build_incisor_mesh(const IncisorSpec& spec, int n1, int n2, int n3);

/// Mirror image across the coordinate plane {x_axis = 0}; cell
/// orientations are repaired. Used in symmetry tests.
Mesh reflect_mesh(const Mesh& mesh, int axis);

} // namespace incisor
