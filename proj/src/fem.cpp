#include "incisor/fem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "incisor/quadrature.hpp"

namespace incisor {

namespace {

// Local edge numbering used for P2 midside dofs.
constexpr int kTriEdges[3][2] = {{0, 1}, {1, 2}, {2, 0}};
constexpr int kTetEdges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

int n_local_edges(int dim) { return dim == 2 ? 3 : 6; }

const int (*local_edges(int dim))[2] { return dim == 2 ? kTriEdges : kTetEdges; }

/// Barycentric coordinates from reference coordinates.
void barycentric(int dim, const std::array<double, 3>& x, double* lambda) {
  if (dim == 2) {
    lambda[0] = 1.0 - x[0] - x[1];
    lambda[1] = x[0];
    lambda[2] = x[1];
  } else {
    lambda[0] = 1.0 - x[0] - x[1] - x[2];
    lambda[1] = x[0];
    lambda[2] = x[1];
    lambda[3] = x[2];
  }
}

/// Gradients of barycentric coordinates in reference coordinates.
void barycentric_grads(int dim, double grads[4][3]) {
  for (int i = 0; i <= dim; ++i) {
    for (int d = 0; d < 3; ++d) grads[i][d] = 0.0;
  }
  for (int d = 0; d < dim; ++d) {
    grads[0][d] = -1.0;
    grads[d + 1][d] = 1.0;
  }
}

void shape_values(int dim, int order, const std::array<double, 3>& ref, double* vals) {
  double l[4];
  barycentric(dim, ref, l);
  const int nv = dim + 1;
  if (order == 1) {
    for (int i = 0; i < nv; ++i) vals[i] = l[i];
    return;
  }
  for (int i = 0; i < nv; ++i) vals[i] = l[i] * (2.0 * l[i] - 1.0);
  const auto edges = local_edges(dim);
  for (int e = 0; e < n_local_edges(dim); ++e) {
    vals[nv + e] = 4.0 * l[edges[e][0]] * l[edges[e][1]];
  }
}

/// Reference-coordinate gradients of the shape functions.
void shape_grads(int dim, int order, const std::array<double, 3>& ref, double grads[10][3]) {
  double l[4];
  double lg[4][3];
  barycentric(dim, ref, l);
  barycentric_grads(dim, lg);
  const int nv = dim + 1;
  if (order == 1) {
    for (int i = 0; i < nv; ++i) {
      for (int d = 0; d < 3; ++d) grads[i][d] = lg[i][d];
    }
    return;
  }
  for (int i = 0; i < nv; ++i) {
    for (int d = 0; d < 3; ++d) grads[i][d] = (4.0 * l[i] - 1.0) * lg[i][d];
  }
  const auto edges = local_edges(dim);
  for (int e = 0; e < n_local_edges(dim); ++e) {
    const int a = edges[e][0], b = edges[e][1];
    for (int d = 0; d < 3; ++d) {
      grads[nv + e][d] = 4.0 * (l[a] * lg[b][d] + l[b] * lg[a][d]);
    }
  }
}

struct CellGeometry {
  double jac_inv_t[3][3]; // J^{-T}, maps reference gradients to physical
  double measure;         // |cell|
};

CellGeometry cell_geometry(const Mesh& mesh, std::size_t c) {
  const auto& cell = mesh.cells[c];
  const auto& p0 = mesh.vertices[cell[0]];
  double J[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 1}};
  for (int col = 0; col < mesh.dim; ++col) {
    const auto& p = mesh.vertices[cell[col + 1]];
    for (int row = 0; row < mesh.dim; ++row) J[row][col] = p[row] - p0[row];
  }
  double det;
  double inv[3][3];
  if (mesh.dim == 2) {
    det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    inv[0][0] = J[1][1] / det;
    inv[0][1] = -J[0][1] / det;
    inv[1][0] = -J[1][0] / det;
    inv[1][1] = J[0][0] / det;
    inv[0][2] = inv[1][2] = inv[2][0] = inv[2][1] = 0.0;
    inv[2][2] = 1.0;
  } else {
    det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
          J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
          J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
    inv[0][0] = (J[1][1] * J[2][2] - J[1][2] * J[2][1]) / det;
    inv[0][1] = (J[0][2] * J[2][1] - J[0][1] * J[2][2]) / det;
    inv[0][2] = (J[0][1] * J[1][2] - J[0][2] * J[1][1]) / det;
    inv[1][0] = (J[1][2] * J[2][0] - J[1][0] * J[2][2]) / det;
    inv[1][1] = (J[0][0] * J[2][2] - J[0][2] * J[2][0]) / det;
    inv[1][2] = (J[0][2] * J[1][0] - J[0][0] * J[1][2]) / det;
    inv[2][0] = (J[1][0] * J[2][1] - J[1][1] * J[2][0]) / det;
    inv[2][1] = (J[0][1] * J[2][0] - J[0][0] * J[2][1]) / det;
    inv[2][2] = (J[0][0] * J[1][1] - J[0][1] * J[1][0]) / det;
  }
  if (!(det > 0.0)) {
    std::ostringstream msg;
    msg << "degenerate cell " << c << " (signed measure " << det << ")";
    throw SolverError(msg.str());
  }
  CellGeometry g;
  g.measure = mesh.dim == 2 ? det / 2.0 : det / 6.0;
  // J^{-T}
  for (int r = 0; r < 3; ++r) {
    for (int cc = 0; cc < 3; ++cc) g.jac_inv_t[r][cc] = inv[cc][r];
  }
  return g;
}

} // namespace

int FeSpace::dofs_per_cell() const {
  const int nv = mesh->dim + 1;
  return order == 1 ? nv : nv + n_local_edges(mesh->dim);
}

std::size_t FeSpace::n_free() const {
  return static_cast<std::size_t>(
      std::count(dirichlet_mask.begin(), dirichlet_mask.end(), char(0)));
}

double FeSpace::eval_in_cell(const Eigen::VectorXd& u, std::size_t c,
                             const std::array<double, 3>& bary) const {
  const int dim = mesh->dim;
  // 2D: full barycentric triple; 3D: reference coordinates directly.
  const std::array<double, 3> ref =
      dim == 2 ? std::array<double, 3>{bary[1], bary[2], 0.0} : bary;
  double vals[10];
  shape_values(dim, order, ref, vals);
  const int nd = dofs_per_cell();
  const int* dofs = cell_dof_row(c);
  double out = 0.0;
  for (int i = 0; i < nd; ++i) out += vals[i] * u[dofs[i]];
  return out;
}

FeSpace build_space(std::shared_ptr<const Mesh> mesh, int order, ArtificialBc artificial_bc) {
  if (order != 1 && order != 2) throw ValidationError("fe order must be 1 or 2");
  FeSpace space;
  space.mesh = mesh;
  space.order = order;
  space.artificial_bc = artificial_bc;

  const Mesh& m = *mesh;
  const int dim = m.dim;
  const int nv_cell = dim + 1;
  const std::size_t n_vertices = m.vertices.size();

  // Node set: vertices, then (P2) midpoints of unique edges.
  std::vector<std::array<double, 3>> nodes(m.vertices.begin(), m.vertices.end());
  std::map<std::pair<int, int>, int> edge_index;
  if (order == 2) {
    const auto edges = local_edges(dim);
    for (const auto& cell : m.cells) {
      for (int e = 0; e < n_local_edges(dim); ++e) {
        int a = cell[edges[e][0]], b = cell[edges[e][1]];
        if (a > b) std::swap(a, b);
        edge_index.emplace(std::make_pair(a, b), 0);
      }
    }
    int next = static_cast<int>(n_vertices);
    for (auto& [key, idx] : edge_index) {
      idx = next++;
      const auto& pa = m.vertices[key.first];
      const auto& pb = m.vertices[key.second];
      nodes.push_back({(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0, (pa[2] + pb[2]) / 2.0});
    }
  }

  // Deterministic numbering: lexicographic by node coordinates.
  std::vector<int> perm(nodes.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&nodes](int a, int b) {
    const auto& pa = nodes[a];
    const auto& pb = nodes[b];
    if (pa[0] != pb[0]) return pa[0] < pb[0];
    if (pa[1] != pb[1]) return pa[1] < pb[1];
    return pa[2] < pb[2];
  });
  std::vector<int> node_to_dof(nodes.size());
  space.dof_coords.resize(nodes.size());
  for (std::size_t rank = 0; rank < perm.size(); ++rank) {
    node_to_dof[perm[rank]] = static_cast<int>(rank);
    space.dof_coords[rank] = nodes[perm[rank]];
  }

  space.vertex_dof.resize(n_vertices);
  for (std::size_t v = 0; v < n_vertices; ++v) space.vertex_dof[v] = node_to_dof[v];

  const int nd_cell = order == 1 ? nv_cell : nv_cell + n_local_edges(dim);
  space.cell_dofs.resize(m.cells.size() * nd_cell);
  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    int* row = space.cell_dofs.data() + c * nd_cell;
    for (int v = 0; v < nv_cell; ++v) row[v] = node_to_dof[m.cells[c][v]];
    if (order == 2) {
      const auto edges = local_edges(dim);
      for (int e = 0; e < n_local_edges(dim); ++e) {
        int a = m.cells[c][edges[e][0]], b = m.cells[c][edges[e][1]];
        if (a > b) std::swap(a, b);
        row[nv_cell + e] = node_to_dof[edge_index.at({a, b})];
      }
    }
  }

  // Dirichlet dofs: nodes of DirichletSigma facets, plus Artificial
  // facets under a Dirichlet artificial condition.
  space.dirichlet_mask.assign(nodes.size(), 0);
  for (const auto& facet : m.boundary_facets) {
    const bool essential = facet.tag == BoundaryTag::DirichletSigma ||
                           (facet.tag == BoundaryTag::Artificial &&
                            artificial_bc == ArtificialBc::Dirichlet);
    if (!essential) continue;
    const int n_facet_verts = dim; // edge in 2D, triangle in 3D
    for (int v = 0; v < n_facet_verts; ++v) {
      space.dirichlet_mask[node_to_dof[facet.vertices[v]]] = 1;
    }
    if (order == 2) {
      for (int a = 0; a < n_facet_verts; ++a) {
        for (int b = a + 1; b < n_facet_verts; ++b) {
          int va = facet.vertices[a], vb = facet.vertices[b];
          if (va > vb) std::swap(va, vb);
          space.dirichlet_mask[node_to_dof[edge_index.at({va, vb})]] = 1;
        }
      }
    }
  }

  return space;
}

AssembledPair assemble(const FeSpace& space) {
  const Mesh& m = *space.mesh;
  const int dim = m.dim;
  const int nd = space.dofs_per_cell();
  const SimplexQuadrature& quad = simplex_quadrature(dim, space.order == 1 ? 2 : 5);
  const std::size_t nq = quad.size();

  // Tabulate reference shape values/gradients once.
  std::vector<double> vals(nq * nd);
  std::vector<std::array<double, 3>> ref_grads(nq * nd);
  for (std::size_t q = 0; q < nq; ++q) {
    double v[10];
    double g[10][3];
    shape_values(dim, space.order, quad.points[q], v);
    shape_grads(dim, space.order, quad.points[q], g);
    for (int i = 0; i < nd; ++i) {
      vals[q * nd + i] = v[i];
      ref_grads[q * nd + i] = {g[i][0], g[i][1], g[i][2]};
    }
  }

  // Free-dof index map.
  AssembledPair out;
  const std::size_t n_dofs = space.n_dofs();
  std::vector<int> dof_to_free(n_dofs, -1);
  out.free_dofs.reserve(space.n_free());
  for (std::size_t d = 0; d < n_dofs; ++d) {
    if (!space.dirichlet_mask[d]) {
      dof_to_free[d] = static_cast<int>(out.free_dofs.size());
      out.free_dofs.push_back(static_cast<int>(d));
    }
  }
  const int n_free = static_cast<int>(out.free_dofs.size());

  std::vector<Eigen::Triplet<double>> kt, mt;
  kt.reserve(m.cells.size() * nd * nd);
  mt.reserve(m.cells.size() * nd * nd);

  std::vector<double> ke(nd * nd), me(nd * nd);
  std::vector<std::array<double, 3>> phys_grads(nd);
  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    const CellGeometry geom = cell_geometry(m, c);
    std::fill(ke.begin(), ke.end(), 0.0);
    std::fill(me.begin(), me.end(), 0.0);
    for (std::size_t q = 0; q < nq; ++q) {
      const double w = quad.weights[q] * geom.measure;
      for (int i = 0; i < nd; ++i) {
        const auto& rg = ref_grads[q * nd + i];
        for (int r = 0; r < 3; ++r) {
          phys_grads[i][r] = geom.jac_inv_t[r][0] * rg[0] + geom.jac_inv_t[r][1] * rg[1] +
                             geom.jac_inv_t[r][2] * rg[2];
        }
      }
      for (int i = 0; i < nd; ++i) {
        for (int j = i; j < nd; ++j) {
          const double kij = w * (phys_grads[i][0] * phys_grads[j][0] +
                                  phys_grads[i][1] * phys_grads[j][1] +
                                  phys_grads[i][2] * phys_grads[j][2]);
          const double mij = w * vals[q * nd + i] * vals[q * nd + j];
          ke[i * nd + j] += kij;
          me[i * nd + j] += mij;
        }
      }
    }
    // Mirror the upper triangle so global symmetry is exact.
    for (int i = 0; i < nd; ++i) {
      for (int j = 0; j < i; ++j) {
        ke[i * nd + j] = ke[j * nd + i];
        me[i * nd + j] = me[j * nd + i];
      }
    }
    const int* dofs = space.cell_dof_row(c);
    for (int i = 0; i < nd; ++i) {
      const int fi = dof_to_free[dofs[i]];
      if (fi < 0) continue;
      for (int j = 0; j < nd; ++j) {
        const int fj = dof_to_free[dofs[j]];
        if (fj < 0) continue;
        kt.emplace_back(fi, fj, ke[i * nd + j]);
        mt.emplace_back(fi, fj, me[i * nd + j]);
      }
    }
  }

  out.K.resize(n_free, n_free);
  out.M.resize(n_free, n_free);
  out.K.setFromTriplets(kt.begin(), kt.end());
  out.M.setFromTriplets(mt.begin(), mt.end());
  out.K.makeCompressed();
  out.M.makeCompressed();
  return out;
}

Eigen::VectorXd expand_free_vector(const FeSpace& space, const AssembledPair& pair,
                                   const Eigen::VectorXd& free_values) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.n_dofs()));
  for (std::size_t i = 0; i < pair.free_dofs.size(); ++i) {
    full[pair.free_dofs[i]] = free_values[static_cast<Eigen::Index>(i)];
  }
  return full;
}

std::array<double, 3> directional_energies(const FeSpace& space, const Eigen::VectorXd& u) {
  const Mesh& m = *space.mesh;
  const int dim = m.dim;
  const int nd = space.dofs_per_cell();
  const SimplexQuadrature& quad = simplex_quadrature(dim, space.order == 1 ? 2 : 5);
  const std::size_t nq = quad.size();

  std::vector<std::array<double, 3>> ref_grads(nq * nd);
  for (std::size_t q = 0; q < nq; ++q) {
    double g[10][3];
    shape_grads(dim, space.order, quad.points[q], g);
    for (int i = 0; i < nd; ++i) ref_grads[q * nd + i] = {g[i][0], g[i][1], g[i][2]};
  }

  std::array<double, 3> energy = {0.0, 0.0, 0.0};
  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    const CellGeometry geom = cell_geometry(m, c);
    const int* dofs = space.cell_dof_row(c);
    for (std::size_t q = 0; q < nq; ++q) {
      const double w = quad.weights[q] * geom.measure;
      double grad_u[3] = {0.0, 0.0, 0.0};
      for (int i = 0; i < nd; ++i) {
        const auto& rg = ref_grads[q * nd + i];
        const double ui = u[dofs[i]];
        for (int r = 0; r < 3; ++r) {
          grad_u[r] += ui * (geom.jac_inv_t[r][0] * rg[0] + geom.jac_inv_t[r][1] * rg[1] +
                             geom.jac_inv_t[r][2] * rg[2]);
        }
      }
      for (int r = 0; r < 3; ++r) energy[r] += w * grad_u[r] * grad_u[r];
    }
  }
  return energy;
}

} // namespace incisor
