#include "incisor/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace incisor {

namespace {

double tri_signed_area(const std::array<double, 3>& a, const std::array<double, 3>& b,
                       const std::array<double, 3>& c) {
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
}

double tet_signed_volume(const std::array<double, 3>& a, const std::array<double, 3>& b,
                         const std::array<double, 3>& c, const std::array<double, 3>& d) {
  const double u[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const double v[3] = {c[0] - a[0], c[1] - a[1], c[2] - a[2]};
  const double w[3] = {d[0] - a[0], d[1] - a[1], d[2] - a[2]};
  const double det = u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0]) +
                     u[2] * (v[0] * w[1] - v[1] * w[0]);
  return det / 6.0;
}

} // namespace

KappaPair::KappaPair(double k1, double k2) : kappa1(k1), kappa2(k2) {
  if (!(std::isfinite(k1) && std::isfinite(k2))) {
    throw ValidationError("kappa must be finite");
  }
  if (!(k1 >= 0.0 && std::abs(k2) <= k1)) {
    std::ostringstream msg;
    msg << "invalid kappa=(" << k1 << "," << k2 << "): requires kappa1 >= 0 and |kappa2| <= kappa1";
    throw ValidationError(msg.str());
  }
}

void StripSpec::validate() const {
  if (!(alpha >= 0.0 && alpha < M_PI / 2.0)) {
    throw ValidationError("strip angle must lie in [0, pi/2)");
  }
  if (!(R - std::tan(alpha) > 1e-12 * std::max(1.0, R))) {
    std::ostringstream msg;
    msg << "strip truncation R=" << R << " must exceed tan(alpha)=" << std::tan(alpha);
    throw ValidationError(msg.str());
  }
  if (!(grading >= 1.0) || !(grading_t >= 1.0)) {
    throw ValidationError("grading factor must be >= 1");
  }
}

void IncisorSpec::validate() const {
  if (!(R1 - kappa.kappa1 > 1e-12 * std::max(1.0, R1))) {
    throw ValidationError("incisor truncation R1 must exceed kappa1");
  }
  if (!(R2 - std::abs(kappa.kappa2) > 1e-12 * std::max(1.0, R2))) {
    throw ValidationError("incisor truncation R2 must exceed |kappa2|");
  }
  if (!(grading >= 1.0)) {
    throw ValidationError("grading factor must be >= 1");
  }
}

double Mesh::cell_measure(std::size_t c) const {
  const auto& cell = cells[c];
  if (dim == 2) {
    return tri_signed_area(vertices[cell[0]], vertices[cell[1]], vertices[cell[2]]);
  }
  return tet_signed_volume(vertices[cell[0]], vertices[cell[1]], vertices[cell[2]],
                           vertices[cell[3]]);
}

double Mesh::total_measure() const {
  double sum = 0.0;
  for (std::size_t c = 0; c < cells.size(); ++c) sum += cell_measure(c);
  return sum;
}

std::vector<double> graded_breakpoints(int n, double grading) {
  if (n < 1) throw ValidationError("cell count must be >= 1");
  std::vector<double> pts(n + 1);
  pts[0] = 0.0;
  pts[n] = 1.0;
  if (grading == 1.0) {
    for (int i = 1; i < n; ++i) pts[i] = static_cast<double>(i) / n;
    return pts;
  }
  // widths w, w*g, ..., w*g^{n-1} with w = (g-1)/(g^n - 1)
  const double gn = std::pow(grading, n);
  for (int i = 1; i < n; ++i) {
    pts[i] = (std::pow(grading, i) - 1.0) / (gn - 1.0);
  }
  for (int i = 0; i < n; ++i) {
    if (!(pts[i + 1] > pts[i])) {
      throw ValidationError("grading too aggressive: breakpoints collapse at this resolution");
    }
  }
  return pts;
}

std::vector<double> power_breakpoints(int n, double beta) {
  if (n < 1) throw ValidationError("cell count must be >= 1");
  if (!(beta >= 1.0)) throw ValidationError("grading exponent must be >= 1");
  std::vector<double> pts(n + 1);
  for (int i = 0; i <= n; ++i) pts[i] = std::pow(static_cast<double>(i) / n, beta);
  pts[n] = 1.0;
  for (int i = 0; i < n; ++i) {
    if (!(pts[i + 1] > pts[i])) {
      throw ValidationError("grading too aggressive: breakpoints collapse at this resolution");
    }
  }
  return pts;
}

std::array<double, 3> StripMeshData::map_point(double s, double t) const {
  const double ta = std::tan(spec.alpha);
  return {t * ta + s * (spec.R - t * ta), t, 0.0};
}

StripMeshData build_strip(const StripSpec& spec, int nx, int ny) {
  spec.validate();
  if (nx < 1 || ny < 1) throw ValidationError("strip cell counts must be >= 1");

  StripMeshData data;
  data.spec = spec;
  data.s_nodes = graded_breakpoints(nx, spec.grading);
  // grading_t is an algebraic exponent refining toward xi2 = 1, where
  // the slanted edge meets the upper Dirichlet side in a corner with a
  // weak singularity; cells away from the corner stay O(1/ny).
  const std::vector<double> t_raw = power_breakpoints(ny, spec.grading_t);
  data.t_nodes.resize(ny + 1);
  for (int j = 0; j <= ny; ++j) data.t_nodes[j] = 1.0 - t_raw[ny - j];
  data.t_nodes[0] = 0.0;
  data.t_nodes[ny] = 1.0;

  auto mesh = std::make_shared<Mesh>();
  mesh->dim = 2;
  mesh->vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      mesh->vertices.push_back(data.map_point(data.s_nodes[i], data.t_nodes[j]));
    }
  }

  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  mesh->cells.reserve(static_cast<std::size_t>(2) * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      // consistent diagonal a-c
      mesh->cells.push_back({a, b, c, -1});
      mesh->cells.push_back({a, c, d, -1});
    }
  }
  for (std::size_t c = 0; c < mesh->cells.size(); ++c) {
    if (!(mesh->cell_measure(c) > 0.0)) {
      std::ostringstream msg;
      msg << "strip mesh cell " << c << " has non-positive area";
      throw SolverError(msg.str());
    }
  }

  // Boundary edges follow the grid structure directly.
  for (int i = 0; i < nx; ++i) {
    mesh->boundary_facets.push_back({{vid(i, 0), vid(i + 1, 0), -1}, BoundaryTag::DirichletSigma});
    mesh->boundary_facets.push_back(
        {{vid(i, ny), vid(i + 1, ny), -1}, BoundaryTag::DirichletSigma});
  }
  for (int j = 0; j < ny; ++j) {
    mesh->boundary_facets.push_back({{vid(0, j), vid(0, j + 1), -1}, BoundaryTag::NeumannPhys});
    mesh->boundary_facets.push_back({{vid(nx, j), vid(nx, j + 1), -1}, BoundaryTag::Artificial});
  }

  data.mesh = mesh;
  return data;
}

Mesh build_strip_mesh(const StripSpec& spec, int nx, int ny) {
  return *build_strip(spec, nx, ny).mesh;
}

void StripMeshData::locate(double xi1, double xi2, int& cell,
                           std::array<double, 3>& bary) const {
  const double ta = std::tan(spec.alpha);
  const double tol = 1e-10;
  double t = xi2;
  if (t < -tol || t > 1.0 + tol) throw ValidationError("point outside strip (xi2)");
  t = std::clamp(t, 0.0, 1.0);
  const double width = spec.R - t * ta;
  double s = (xi1 - t * ta) / width;
  if (s < -tol || s > 1.0 + tol) throw ValidationError("point outside strip (xi1)");
  s = std::clamp(s, 0.0, 1.0);

  auto interval = [](const std::vector<double>& nodes, double x) {
    int lo = static_cast<int>(std::upper_bound(nodes.begin(), nodes.end(), x) - nodes.begin()) - 1;
    return std::clamp(lo, 0, static_cast<int>(nodes.size()) - 2);
  };
  const int i = interval(s_nodes, s);
  const int j = interval(t_nodes, t);

  // The two triangles of quad (i,j), in generation order.
  const int base = 2 * (j * nx() + i);
  const Mesh& m = *mesh;
  for (int k = 0; k < 2; ++k) {
    const auto& cl = m.cells[base + k];
    const auto& p0 = m.vertices[cl[0]];
    const auto& p1 = m.vertices[cl[1]];
    const auto& p2 = m.vertices[cl[2]];
    const double area = tri_signed_area(p0, p1, p2);
    const std::array<double, 3> p = {xi1, xi2, 0.0};
    const double l1 = tri_signed_area(p0, p, p2) / area;
    const double l2 = tri_signed_area(p0, p1, p) / area;
    const double l0 = 1.0 - l1 - l2;
    const double slack = 1e-9;
    if (l0 >= -slack && l1 >= -slack && l2 >= -slack) {
      cell = base + k;
      bary = {l0, l1, l2};
      return;
    }
  }
  throw ValidationError("point location failed inside strip cell");
}

Mesh build_incisor_mesh(const IncisorSpec& spec, int n1, int n2, int n3) {
  spec.validate();
  if (n1 < 1 || n2 < 1 || n3 < 1) throw ValidationError("incisor cell counts must be >= 1");

  const double k1 = spec.kappa.kappa1;
  const double k2 = spec.kappa.kappa2;
  const std::vector<double> s1 = graded_breakpoints(n1, spec.grading);
  const std::vector<double> s2 = graded_breakpoints(n2, spec.grading);
  const std::vector<double> s3 = graded_breakpoints(n3, 1.0);

  Mesh mesh;
  mesh.dim = 3;
  mesh.vertices.reserve(static_cast<std::size_t>(n1 + 1) * (n2 + 1) * (n3 + 1));
  for (int k = 0; k <= n3; ++k) {
    const double t = s3[k];
    for (int j = 0; j <= n2; ++j) {
      for (int i = 0; i <= n1; ++i) {
        const double x1 = k1 * t + s1[i] * (spec.R1 - k1 * t);
        const double x2 = k2 * t + s2[j] * (spec.R2 - k2 * t);
        mesh.vertices.push_back({x1, x2, t});
      }
    }
  }

  auto vid = [n1, n2](int i, int j, int k) { return (k * (n2 + 1) + j) * (n1 + 1) + i; };

  // Path subdivision of each hexahedron into 6 tetrahedra. Every tet
  // contains the main diagonal c000-c111; face diagonals are induced
  // consistently across neighbouring hexahedra, so the global mesh is
  // conforming. Corner labels are (i-offset, j-offset, k-offset).
  static const int kTetCorners[6][4][3] = {
      {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}},
      {{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {1, 1, 1}},
      {{0, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 1, 1}},
      {{0, 0, 0}, {0, 1, 0}, {0, 1, 1}, {1, 1, 1}},
      {{0, 0, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}},
      {{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {1, 1, 1}},
  };

  mesh.cells.reserve(static_cast<std::size_t>(6) * n1 * n2 * n3);
  for (int k = 0; k < n3; ++k) {
    for (int j = 0; j < n2; ++j) {
      for (int i = 0; i < n1; ++i) {
        for (const auto& tet : kTetCorners) {
          std::array<int, 4> cell;
          for (int v = 0; v < 4; ++v) {
            cell[v] = vid(i + tet[v][0], j + tet[v][1], k + tet[v][2]);
          }
          if (tet_signed_volume(mesh.vertices[cell[0]], mesh.vertices[cell[1]],
                                mesh.vertices[cell[2]], mesh.vertices[cell[3]]) < 0.0) {
            std::swap(cell[2], cell[3]);
          }
          mesh.cells.push_back(cell);
        }
      }
    }
  }
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    if (!(mesh.cell_measure(c) > 0.0)) {
      std::ostringstream msg;
      msg << "incisor mesh cell " << c << " has non-positive volume";
      throw SolverError(msg.str());
    }
  }

  // Boundary faces = faces appearing in exactly one tet; classified by
  // the grid plane all three corners share (exact integer test).
  const int np1 = n1 + 1, np2 = n2 + 1;
  auto grid_of = [np1, np2](int v) {
    const int i = v % np1;
    const int j = (v / np1) % np2;
    const int k = v / (np1 * np2);
    return std::array<int, 3>{i, j, k};
  };

  std::map<std::array<int, 3>, int> face_count;
  for (const auto& cell : mesh.cells) {
    static const int kFaces[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
    for (const auto& f : kFaces) {
      std::array<int, 3> tri = {cell[f[0]], cell[f[1]], cell[f[2]]};
      std::sort(tri.begin(), tri.end());
      ++face_count[tri];
    }
  }

  const BoundaryTag slant_tag =
      spec.dirichlet_everywhere ? BoundaryTag::DirichletSigma : BoundaryTag::NeumannPhys;
  for (const auto& [tri, count] : face_count) {
    if (count != 1) continue;
    const auto g0 = grid_of(tri[0]), g1 = grid_of(tri[1]), g2 = grid_of(tri[2]);
    BoundaryTag tag;
    if (g0[2] == 0 && g1[2] == 0 && g2[2] == 0) {
      tag = BoundaryTag::DirichletSigma;
    } else if (g0[2] == n3 && g1[2] == n3 && g2[2] == n3) {
      tag = BoundaryTag::DirichletSigma;
    } else if (g0[0] == 0 && g1[0] == 0 && g2[0] == 0) {
      tag = slant_tag;
    } else if (g0[1] == 0 && g1[1] == 0 && g2[1] == 0) {
      tag = slant_tag;
    } else if (g0[0] == n1 && g1[0] == n1 && g2[0] == n1) {
      tag = BoundaryTag::Artificial;
    } else if (g0[1] == n2 && g1[1] == n2 && g2[1] == n2) {
      tag = BoundaryTag::Artificial;
    } else {
      throw SolverError("incisor mesh: boundary face off every boundary plane");
    }
    mesh.boundary_facets.push_back({tri, tag});
  }

  return mesh;
}

Mesh reflect_mesh(const Mesh& mesh, int axis) {
  if (axis < 0 || axis >= mesh.dim) throw ValidationError("reflection axis out of range");
  // Negation is an exact involution, so reflecting twice restores the
  // coordinates bitwise.
  Mesh out = mesh;
  for (auto& v : out.vertices) v[axis] = -v[axis];
  // Reflection flips orientation; swap two vertices in every cell.
  for (auto& cell : out.cells) {
    if (out.dim == 2) {
      std::swap(cell[1], cell[2]);
    } else {
      std::swap(cell[2], cell[3]);
    }
  }
  return out;
}

} // namespace incisor
