#include "rsm/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace rsm {

namespace {

void append_double(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  line += buf;
}

void write_rows(const MeshMatrix& matrix, const Grid& grid, const Field* field,
                const std::vector<std::string>* names, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: byte-identical across platforms
  if (!out) throw std::runtime_error("write_snapshot: cannot open " + path);

  std::string header = "line,level,center_x";
  if (matrix.bounds().dim == 2) header += ",center_y";
  header += ",size";
  if (names)
    for (const std::string& n : *names) header += "," + n;
  out << header << '\n';

  std::string line;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cell_line c = grid.cells()[i];
    const CellGeometry g = matrix.geometry(c);
    line.clear();
    line += std::to_string(c);
    line += ',';
    line += std::to_string(matrix.level_of(c));
    line += ',';
    append_double(line, g.center[0]);
    if (matrix.bounds().dim == 2) {
      line += ',';
      append_double(line, g.center[1]);
    }
    line += ',';
    append_double(line, g.size);
    if (field) {
      for (int k = 0; k < field->components; ++k) {
        line += ',';
        append_double(line, field->at(i, k));
      }
    }
    line += '\n';
    out << line;
  }
  if (!out) throw std::runtime_error("write_snapshot: write failed for " + path);
}

}  // namespace

void write_snapshot(const MeshMatrix& matrix, const Grid& grid, const std::string& path) {
  write_rows(matrix, grid, nullptr, nullptr, path);
}

void write_snapshot(const MeshMatrix& matrix, const Field& field,
                    const std::vector<std::string>& component_names,
                    const std::string& path) {
  if (static_cast<int>(component_names.size()) != field.components)
    throw std::invalid_argument("write_snapshot: component name count mismatch");
  write_rows(matrix, field.grid, &field, &component_names, path);
}

}  // namespace rsm
