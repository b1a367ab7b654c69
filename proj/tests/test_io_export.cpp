#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "incisor/io_export.hpp"

using namespace incisor;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("format_double: 17 significant digits, round-trip exact") {
  CHECK(format_double(M_PI * M_PI) == "9.869604401089358");
  for (const double x : {0.1, -3.5e-17, 12345.678901234567, 2.0 / 3.0}) {
    const double back = std::strtod(format_double(x).c_str(), nullptr);
    CHECK(std::memcmp(&back, &x, sizeof(double)) == 0);
  }
}

TEST_CASE("csv: header-only for an empty table") {
  CurveTable table;
  table.columns = {"alpha", "mu1"};
  const std::string path = temp_path("incisor_empty.csv");
  write_csv(table, path);
  CHECK(slurp(path) == "alpha,mu1\n");
}

TEST_CASE("csv: round trip is bitwise exact and deterministic") {
  CurveTable table;
  table.columns = {"a", "b", "c"};
  table.add_row({M_PI * M_PI, -1.0 / 3.0, 1e-300});
  table.add_row({0.0, 7.25, -42.0});
  const std::string path = temp_path("incisor_roundtrip.csv");
  write_csv(table, path);
  const std::string first = slurp(path);
  write_csv(table, path);
  CHECK(slurp(path) == first);

  const CurveTable parsed = read_csv(path);
  REQUIRE(parsed.columns == table.columns);
  REQUIRE(parsed.rows.size() == table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      CHECK(std::memcmp(&parsed.rows[r][c], &table.rows[r][c], sizeof(double)) == 0);
    }
  }

  CHECK_THROWS_AS(table.add_row({1.0}), ValidationError);
}

TEST_CASE("csv: provenance goes to the sidecar, not the csv") {
  CurveTable table;
  table.columns = {"x"};
  table.add_row({1.0});
  table.provenance["build"] = "test";
  const std::string path = temp_path("incisor_meta.csv");
  write_csv(table, path);
  CHECK(slurp(path) == "x\n1\n");
  CHECK(slurp(path + ".meta.json").find("\"build\"") != std::string::npos);
}

TEST_CASE("vtk: frozen two-triangle reference with zero field") {
  StripSpec spec;
  spec.alpha = 0.0;
  spec.R = 1.0;
  const Mesh mesh = build_strip_mesh(spec, 1, 1);
  const std::string path = temp_path("incisor_square.vtk");
  write_vtk(mesh, std::vector<double>(4, 0.0), path);
  const std::string expected =
      "# vtk DataFile Version 3.0\n"
      "incisor field\n"
      "ASCII\n"
      "DATASET UNSTRUCTURED_GRID\n"
      "POINTS 4 double\n"
      "0 0 0\n"
      "1 0 0\n"
      "0 1 0\n"
      "1 1 0\n"
      "CELLS 2 8\n"
      "3 0 1 3\n"
      "3 0 3 2\n"
      "CELL_TYPES 2\n"
      "5\n"
      "5\n"
      "POINT_DATA 4\n"
      "SCALARS u double 1\n"
      "LOOKUP_TABLE default\n"
      "0\n"
      "0\n"
      "0\n"
      "0\n";
  CHECK(slurp(path) == expected);

  CHECK_THROWS_AS(write_vtk(mesh, std::vector<double>(3, 0.0), path), ValidationError);
}

TEST_CASE("vtk: tetrahedra use cell type 10 and boundary file carries tags") {
  IncisorSpec spec;
  spec.kappa = KappaPair(0.0, 0.0);
  spec.R1 = spec.R2 = 1.0;
  const Mesh mesh = build_incisor_mesh(spec, 1, 1, 1);
  const std::string path = temp_path("incisor_cube.vtk");
  write_vtk(mesh, std::vector<double>(8, 1.0), path);
  CHECK(slurp(path).find("CELL_TYPES 6\n10\n") != std::string::npos);

  const std::string bpath = temp_path("incisor_cube_boundary.vtk");
  write_vtk_boundary(mesh, bpath);
  const std::string content = slurp(bpath);
  CHECK(content.find("SCALARS boundary_tag int 1") != std::string::npos);
  CHECK(content.find("CELL_DATA 12") != std::string::npos);
}

TEST_CASE("matrix market: symmetric lower triangle") {
  Eigen::SparseMatrix<double> A(2, 2);
  A.insert(0, 0) = 2.0;
  A.insert(1, 0) = -1.0;
  A.insert(0, 1) = -1.0;
  A.insert(1, 1) = 2.0;
  A.makeCompressed();
  const std::string path = temp_path("incisor_mm.mtx");
  write_matrix_market(A, path);
  CHECK(slurp(path) ==
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "2 2 3\n"
        "1 1 2\n"
        "2 1 -1\n"
        "2 2 2\n");
}
