#include "incisor/io_export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace incisor {

namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary); // binary: LF endings everywhere
  if (!out) throw ValidationError("cannot open for writing: " + path);
  return out;
}

} // namespace

void CurveTable::add_row(std::initializer_list<double> values) {
  if (values.size() != columns.size()) {
    throw ValidationError("CurveTable: row width does not match column count");
  }
  rows.emplace_back(values);
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_csv(const CurveTable& table, const std::string& path) {
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw ValidationError("CurveTable: inconsistent row width");
    }
  }
  std::ofstream out = open_for_write(path);
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) out << ',';
    out << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << ',';
      out << format_double(row[c]);
    }
    out << '\n';
  }
  if (!out) throw ValidationError("write failed: " + path);

  if (!table.provenance.empty()) {
    nlohmann::json meta;
    for (const auto& [key, value] : table.provenance) meta[key] = value;
    std::ofstream side = open_for_write(path + ".meta.json");
    side << meta.dump(2) << '\n';
  }
}

CurveTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open for reading: " + path);
  CurveTable table;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(s);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!s.empty() && s.back() == ',') fields.emplace_back();
    return fields;
  };
  if (!std::getline(in, line)) return table;
  table.columns = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& f : split(line)) row.push_back(std::strtod(f.c_str(), nullptr));
    if (row.size() != table.columns.size()) {
      throw ValidationError("read_csv: inconsistent row width in " + path);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_vtk(const Mesh& mesh, const std::vector<double>& field, const std::string& path) {
  if (field.size() != mesh.vertices.size()) {
    throw ValidationError("write_vtk: field length does not match vertex count");
  }
  std::ofstream out = open_for_write(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "incisor field\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertices.size() << " double\n";
  for (const auto& v : mesh.vertices) {
    out << format_double(v[0]) << ' ' << format_double(v[1]) << ' ' << format_double(v[2])
        << '\n';
  }
  const int npc = mesh.vertices_per_cell();
  out << "CELLS " << mesh.cells.size() << ' ' << mesh.cells.size() * (npc + 1) << '\n';
  for (const auto& cell : mesh.cells) {
    out << npc;
    for (int v = 0; v < npc; ++v) out << ' ' << cell[v];
    out << '\n';
  }
  out << "CELL_TYPES " << mesh.cells.size() << '\n';
  const int cell_type = mesh.dim == 2 ? 5 : 10; // VTK_TRIANGLE / VTK_TETRA
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) out << cell_type << '\n';
  out << "POINT_DATA " << field.size() << '\n';
  out << "SCALARS u double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (const double f : field) out << format_double(f) << '\n';
  if (!out) throw ValidationError("write failed: " + path);
}

void write_vtk_boundary(const Mesh& mesh, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "incisor boundary tags\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertices.size() << " double\n";
  for (const auto& v : mesh.vertices) {
    out << format_double(v[0]) << ' ' << format_double(v[1]) << ' ' << format_double(v[2])
        << '\n';
  }
  const int npf = mesh.dim; // segment in 2D, triangle in 3D
  out << "CELLS " << mesh.boundary_facets.size() << ' '
      << mesh.boundary_facets.size() * (npf + 1) << '\n';
  for (const auto& facet : mesh.boundary_facets) {
    out << npf;
    for (int v = 0; v < npf; ++v) out << ' ' << facet.vertices[v];
    out << '\n';
  }
  out << "CELL_TYPES " << mesh.boundary_facets.size() << '\n';
  const int facet_type = mesh.dim == 2 ? 3 : 5; // VTK_LINE / VTK_TRIANGLE
  for (std::size_t f = 0; f < mesh.boundary_facets.size(); ++f) out << facet_type << '\n';
  out << "CELL_DATA " << mesh.boundary_facets.size() << '\n';
  out << "SCALARS boundary_tag int 1\n";
  out << "LOOKUP_TABLE default\n";
  for (const auto& facet : mesh.boundary_facets) out << static_cast<int>(facet.tag) << '\n';
  if (!out) throw ValidationError("write failed: " + path);
}

void write_sweep_csv(const SweepResult& sweep, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "kappa1,kappa2,lambda1_over_pi2,lambda_dagger_over_pi2,below_flag,margin,"
         "R1,R2,n1,n2,n3,order\n";
  const double pi2 = M_PI * M_PI;
  for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
    const SpectrumReport& rep = sweep.reports[i];
    out << format_double(sweep.kappa1) << ',' << format_double(sweep.kappa2[i]) << ',';
    if (const auto l1 = rep.lambda1()) out << format_double(*l1 / pi2);
    out << ',' << format_double(rep.lambda_dagger / pi2) << ','
        << (rep.count_below() > 0 ? 1 : 0) << ',' << format_double(rep.margin) << ','
        << format_double(rep.R1) << ',' << format_double(rep.R2) << ',' << rep.n1 << ','
        << rep.n2 << ',' << rep.n3 << ',' << rep.order << '\n';
  }
  if (!out) throw ValidationError("write failed: " + path);
}

std::string spectrum_report_json(const SpectrumReport& report) {
  nlohmann::json j;
  j["kappa1"] = report.kappa.kappa1;
  j["kappa2"] = report.kappa.kappa2;
  j["lambda_dagger"] = report.lambda_dagger;
  j["margin"] = report.margin;
  j["eigenvalues"] = report.eigenvalues;
  j["residuals"] = report.residuals;
  std::vector<int> below(report.below.size());
  for (std::size_t i = 0; i < report.below.size(); ++i) below[i] = report.below[i] ? 1 : 0;
  j["below"] = below;
  j["count_below"] = report.count_below();
  if (const auto l1 = report.lambda1()) j["lambda1"] = *l1;
  j["undecided"] = report.undecided;
  if (!report.warning.empty()) j["warning"] = report.warning;
  j["numerics"] = {{"R1", report.R1},       {"R2", report.R2}, {"n1", report.n1},
                   {"n2", report.n2},       {"n3", report.n3}, {"order", report.order},
                   {"artificial_bc",
                    report.artificial_bc == ArtificialBc::Neumann ? "neumann" : "dirichlet"}};
  return j.dump(2);
}

void write_matrix_market(const Eigen::SparseMatrix<double>& A, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  std::size_t nnz_lower = 0;
  for (int col = 0; col < A.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it) {
      if (it.row() >= it.col()) ++nnz_lower;
    }
  }
  out << A.rows() << ' ' << A.cols() << ' ' << nnz_lower << '\n';
  for (int col = 0; col < A.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it) {
      if (it.row() < it.col()) continue;
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << format_double(it.value()) << '\n';
    }
  }
  if (!out) throw ValidationError("write failed: " + path);
}

} // namespace incisor
