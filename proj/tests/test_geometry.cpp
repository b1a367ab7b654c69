#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "incisor/geometry.hpp"
#include "support/mesh_audit.hpp"

using namespace incisor;

namespace {

/// Vertices must satisfy the defining inequalities of the source domain.
bool strip_vertices_inside(const Mesh& mesh, const StripSpec& spec) {
  const double tol = 1e-12;
  for (const auto& v : mesh.vertices) {
    if (v[1] < -tol || v[1] > 1.0 + tol) return false;
    if (v[0] < v[1] * std::tan(spec.alpha) - tol) return false;
    if (v[0] > spec.R + tol) return false;
  }
  return true;
}

bool incisor_vertices_inside(const Mesh& mesh, const IncisorSpec& spec) {
  const double tol = 1e-12;
  for (const auto& v : mesh.vertices) {
    if (v[2] < -tol || v[2] > 1.0 + tol) return false;
    if (v[0] < spec.kappa.kappa1 * v[2] - tol || v[0] > spec.R1 + tol) return false;
    if (v[1] < spec.kappa.kappa2 * v[2] - tol || v[1] > spec.R2 + tol) return false;
  }
  return true;
}

} // namespace

TEST_CASE("kappa validation") {
  CHECK_NOTHROW(KappaPair(1.0, -1.0));
  CHECK_NOTHROW(KappaPair(0.0, 0.0));
  CHECK_THROWS_AS(KappaPair(-0.5, 0.0), ValidationError);
  CHECK_THROWS_AS(KappaPair(1.0, 2.0), ValidationError);
  CHECK_THROWS_AS(KappaPair(1.0, -1.5), ValidationError);

  const KappaPair k(1.0, -1.0);
  CHECK(k.alpha1() == doctest::Approx(M_PI / 4.0));
  CHECK(k.alpha2() == doctest::Approx(-M_PI / 4.0));
  CHECK(std::abs(k.alpha2()) <= k.alpha1());
}

TEST_CASE("strip: unit square identity map") {
  StripSpec spec;
  spec.alpha = 0.0;
  spec.R = 1.0;
  const Mesh mesh = build_strip_mesh(spec, 1, 1);
  CHECK(mesh.n_vertices() == 4);
  CHECK(mesh.n_cells() == 2);
  CHECK(mesh.total_measure() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(audit::audit_ok(mesh));
}

TEST_CASE("strip: trapezoid area alpha=pi/4 R=12") {
  StripSpec spec;
  spec.alpha = M_PI / 4.0;
  spec.R = 12.0;
  for (const auto& [nx, ny] : {std::pair{7, 5}, std::pair{24, 16}}) {
    const Mesh mesh = build_strip_mesh(spec, nx, ny);
    CHECK(mesh.total_measure() == doctest::Approx(12.0 - 0.5).epsilon(1e-10));
  }
}

TEST_CASE("strip: full audit at production size") {
  StripSpec spec;
  spec.alpha = M_PI / 4.0;
  spec.R = 12.0;
  const Mesh mesh = build_strip_mesh(spec, 240, 20);
  CHECK(mesh.n_cells() == 2 * 240 * 20);
  const audit::AuditReport report = audit::run_audit(mesh);
  CHECK(report.positive_orientation);
  CHECK(report.conforming);
  CHECK(report.tags_cover_boundary);
  CHECK(report.tags_unique);
  CHECK(strip_vertices_inside(mesh, spec));
}

TEST_CASE("strip: graded breakpoints partition [0,1]") {
  const auto pts = graded_breakpoints(17, 1.1);
  REQUIRE(pts.size() == 18);
  CHECK(pts.front() == 0.0);
  CHECK(pts.back() == 1.0);
  CHECK(std::is_sorted(pts.begin(), pts.end()));
  // widths grow by the grading ratio
  for (std::size_t i = 2; i < pts.size(); ++i) {
    const double r = (pts[i] - pts[i - 1]) / (pts[i - 1] - pts[i - 2]);
    CHECK(r == doctest::Approx(1.1).epsilon(1e-9));
  }
}

TEST_CASE("strip: rejects degenerate truncation") {
  StripSpec spec;
  spec.alpha = M_PI / 4.0;
  spec.R = 1.0; // tan(pi/4) = 1: empty strip
  CHECK_THROWS_AS(build_strip_mesh(spec, 2, 2), ValidationError);
}

TEST_CASE("incisor: unit cube identity map") {
  IncisorSpec spec;
  spec.kappa = KappaPair(0.0, 0.0);
  spec.R1 = spec.R2 = 1.0;
  const Mesh mesh = build_incisor_mesh(spec, 1, 1, 1);
  CHECK(mesh.n_vertices() == 8);
  CHECK(mesh.n_cells() == 6);
  CHECK(mesh.total_measure() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(audit::audit_ok(mesh));
}

TEST_CASE("incisor: analytic volume") {
  IncisorSpec spec;
  spec.kappa = KappaPair(1.0, -1.0);
  spec.R1 = spec.R2 = 6.0;
  for (const auto& [n1, n2, n3] : {std::tuple{3, 4, 2}, std::tuple{8, 8, 5}}) {
    const Mesh mesh = build_incisor_mesh(spec, n1, n2, n3);
    // R1 R2 - (k1 R2 + k2 R1)/2 + k1 k2/3
    CHECK(mesh.total_measure() == doctest::Approx(36.0 - 0.0 - 1.0 / 3.0).epsilon(1e-9));
  }
}

TEST_CASE("incisor: full audit at production size") {
  IncisorSpec spec;
  spec.kappa = KappaPair(1.0, 1.0);
  spec.R1 = spec.R2 = 6.0;
  const Mesh mesh = build_incisor_mesh(spec, 24, 24, 8);
  const audit::AuditReport report = audit::run_audit(mesh);
  CHECK(report.positive_orientation);
  CHECK(report.conforming);
  CHECK(report.tags_cover_boundary);
  CHECK(report.tags_unique);
  CHECK(incisor_vertices_inside(mesh, spec));
}

TEST_CASE("incisor: conformity sweep over resolutions") {
  IncisorSpec spec;
  spec.kappa = KappaPair(1.5, -0.5);
  spec.R1 = 5.0;
  spec.R2 = 4.0;
  spec.grading = 1.2;
  for (const auto& [n1, n2, n3] :
       {std::tuple{1, 1, 1}, std::tuple{2, 5, 3}, std::tuple{32, 4, 2}, std::tuple{9, 32, 7}}) {
    const Mesh mesh = build_incisor_mesh(spec, n1, n2, n3);
    CHECK(audit::audit_ok(mesh));
    CHECK(incisor_vertices_inside(mesh, spec));
    const double volume = spec.R1 * spec.R2 -
                          (spec.kappa.kappa1 * spec.R2 + spec.kappa.kappa2 * spec.R1) / 2.0 +
                          spec.kappa.kappa1 * spec.kappa.kappa2 / 3.0;
    CHECK(mesh.total_measure() == doctest::Approx(volume).epsilon(1e-9));
  }
}

TEST_CASE("incisor: boundary tags by plane") {
  IncisorSpec spec;
  spec.kappa = KappaPair(1.0, -1.0);
  spec.R1 = spec.R2 = 6.0;
  const Mesh mesh = build_incisor_mesh(spec, 4, 4, 3);
  int n_sigma = 0, n_phys = 0, n_artificial = 0;
  for (const auto& bf : mesh.boundary_facets) {
    switch (bf.tag) {
      case BoundaryTag::DirichletSigma: ++n_sigma; break;
      case BoundaryTag::NeumannPhys: ++n_phys; break;
      case BoundaryTag::Artificial: ++n_artificial; break;
    }
  }
  // two horizontal quads, two slanted faces, two truncation faces; each
  // structured face holds 2 triangles per quad
  CHECK(n_sigma == 2 * 2 * 4 * 4);
  CHECK(n_phys == 2 * 2 * 4 * 3);
  CHECK(n_artificial == 2 * 2 * 4 * 3);

  SUBCASE("dirichlet_everywhere retags the slant faces") {
    spec.dirichlet_everywhere = true;
    const Mesh all_dirichlet = build_incisor_mesh(spec, 4, 4, 3);
    int phys = 0;
    for (const auto& bf : all_dirichlet.boundary_facets) {
      if (bf.tag == BoundaryTag::NeumannPhys) ++phys;
    }
    CHECK(phys == 0);
  }
}

TEST_CASE("incisor: rejects degenerate truncations") {
  IncisorSpec spec;
  spec.kappa = KappaPair(2.0, 1.0);
  spec.R1 = 2.0;
  spec.R2 = 6.0;
  CHECK_THROWS_AS(build_incisor_mesh(spec, 2, 2, 2), ValidationError);
  spec.R1 = 6.0;
  spec.R2 = 0.5;
  CHECK_THROWS_AS(build_incisor_mesh(spec, 2, 2, 2), ValidationError);
}

TEST_CASE("reflect: involution and isometry") {
  StripSpec spec;
  spec.alpha = M_PI / 5.0;
  spec.R = 6.0;
  const Mesh mesh = build_strip_mesh(spec, 9, 5);
  const Mesh twice = reflect_mesh(reflect_mesh(mesh, 0), 0);
  for (std::size_t v = 0; v < mesh.n_vertices(); ++v) {
    for (int d = 0; d < 3; ++d) {
      CHECK(std::abs(twice.vertices[v][d] - mesh.vertices[v][d]) <= 1e-15);
    }
  }

  const Mesh reflected = reflect_mesh(mesh, 0);
  CHECK(audit::audit_ok(reflected));
  std::multiset<double> original_areas, reflected_areas;
  for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
    original_areas.insert(std::round(mesh.cell_measure(c) * 1e12));
    reflected_areas.insert(std::round(reflected.cell_measure(c) * 1e12));
  }
  CHECK(original_areas == reflected_areas);

  const Mesh strip3d = build_incisor_mesh(
      []() {
        IncisorSpec s;
        s.kappa = KappaPair(1.0, 0.5);
        s.R1 = s.R2 = 4.0;
        return s;
      }(),
      3, 4, 2);
  const Mesh r3d = reflect_mesh(strip3d, 1);
  CHECK(audit::audit_ok(r3d));
  CHECK(r3d.total_measure() == doctest::Approx(strip3d.total_measure()).epsilon(1e-12));
}

TEST_CASE("strip point location matches the generator") {
  StripSpec spec;
  spec.alpha = 0.6;
  spec.R = 8.0;
  spec.grading = 1.15;
  const StripMeshData grid = build_strip(spec, 11, 7);
  // every vertex locates inside a cell containing it
  for (const auto& v : grid.mesh->vertices) {
    int cell = -1;
    std::array<double, 3> bary{};
    grid.locate(v[0], v[1], cell, bary);
    REQUIRE(cell >= 0);
    const auto& c = grid.mesh->cells[cell];
    double x = 0.0, y = 0.0;
    for (int i = 0; i < 3; ++i) {
      x += bary[i] * grid.mesh->vertices[c[i]][0];
      y += bary[i] * grid.mesh->vertices[c[i]][1];
    }
    CHECK(x == doctest::Approx(v[0]).epsilon(1e-10));
    CHECK(y == doctest::Approx(v[1]).epsilon(1e-10));
  }
  int cell = -1;
  std::array<double, 3> bary{};
  CHECK_THROWS_AS(grid.locate(-1.0, 0.5, cell, bary), ValidationError);
  CHECK_THROWS_AS(grid.locate(4.0, 1.5, cell, bary), ValidationError);
}
