#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "incisor/geometry.hpp"
#include "incisor/spectral3d.hpp"

namespace incisor {

/// Column-labelled numeric table. Numbers are serialized with up to 17
/// significant digits so they round-trip exactly; output bytes are
/// deterministic for identical input.
struct CurveTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, std::string> provenance; // written to a sidecar, never hashed

  void add_row(std::initializer_list<double> values);
};

std::string format_double(double value); // %.17g, C locale

/// RFC-4180-style CSV: header row, LF line endings. Provenance, when
/// present, goes to `<path>.meta.json` so the CSV itself stays plain.
void write_csv(const CurveTable& table, const std::string& path);

/// Parse back a CSV written by write_csv (used for round-trip checks).
CurveTable read_csv(const std::string& path);

/// Legacy ASCII VTK 3.0 UNSTRUCTURED_GRID with one POINT_DATA scalar
/// field "u". field.size() must equal the vertex count (P2 fields are
/// restricted to vertex values before export).
void write_vtk(const Mesh& mesh, const std::vector<double>& field, const std::string& path);

/// Companion boundary-facet file: the boundary facets as cells with a
/// CELL_DATA integer field "boundary_tag".
void write_vtk_boundary(const Mesh& mesh, const std::string& path);

/// Matrix Market coordinate format, symmetric, lower triangle.
void write_matrix_market(const Eigen::SparseMatrix<double>& A, const std::string& path);

/// Sweep curve CSV: kappa1, kappa2, lambda1_over_pi2 (empty when no
/// eigenvalue sits below the threshold), lambda_dagger_over_pi2,
/// below_flag, margin, R1, R2, n1, n2, n3, order.
void write_sweep_csv(const SweepResult& sweep, const std::string& path);

/// Pretty-printed JSON for one spectrum report (same fields as the
/// sweep CSV plus residuals and warnings).
std::string spectrum_report_json(const SpectrumReport& report);

} // namespace incisor
