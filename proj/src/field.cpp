#include "rsm/field.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "rsm/errors.hpp"

namespace rsm {

namespace {
constexpr int k_max_components = 8;
}

Field::Field(Grid g, int ncomp, double fill) : grid(std::move(g)), components(ncomp) {
  if (components < 1 || components > k_max_components)
    throw std::invalid_argument("Field: components out of range");
  values.assign(grid.size() * static_cast<std::size_t>(components), fill);
}

namespace {

// Average of the source values covering D(cell). The daughters are combined
// diagonally, (NW+SE)+(NE+SW), so the result is bit-identical under every
// symmetry of the square; the 2^-d weights are exact powers of two.
void gather_average(const MeshMatrix& m, const Field& src, cell_line cell, double* out) {
  if (src.grid.contains(cell)) {
    const double* r = src.row(src.grid.index_of(cell));
    for (int c = 0; c < src.components; ++c) out[c] = r[c];
    return;
  }
  if (m.level_of(cell) >= m.bounds().level_max)
    throw GridMismatchError("project_down: target cell not covered by source grid");
  double acc[k_max_components];
  if (m.bounds().dim == 1) {
    double a[k_max_components], b[k_max_components];
    gather_average(m, src, m.daughter(cell, k_left), a);
    gather_average(m, src, m.daughter(cell, k_right), b);
    for (int c = 0; c < src.components; ++c) acc[c] = 0.5 * (a[c] + b[c]);
  } else {
    double nw[k_max_components], ne[k_max_components], sw[k_max_components],
        se[k_max_components];
    gather_average(m, src, m.daughter(cell, k_nw), nw);
    gather_average(m, src, m.daughter(cell, k_ne), ne);
    gather_average(m, src, m.daughter(cell, k_sw), sw);
    gather_average(m, src, m.daughter(cell, k_se), se);
    for (int c = 0; c < src.components; ++c)
      acc[c] = 0.25 * ((nw[c] + se[c]) + (ne[c] + sw[c]));
  }
  for (int c = 0; c < src.components; ++c) out[c] = acc[c];
}

}  // namespace

Field project_down(const MeshMatrix& matrix, const Field& field, const Grid& target) {
  Field out(target, field.components);
  for (std::size_t i = 0; i < target.size(); ++i)
    gather_average(matrix, field, target.cells()[i], out.row(i));
  return out;
}

Field project_up(const MeshMatrix& matrix, const Field& field, const Grid& target) {
  Field out(target, field.components);
  for (std::size_t i = 0; i < target.size(); ++i) {
    cell_line a = target.cells()[i];
    while (a != k_no_line && !field.grid.contains(a)) a = matrix.mother(a);
    if (a == k_no_line)
      throw GridMismatchError("project_up: target cell has no source ancestor");
    const double* r = field.row(field.grid.index_of(a));
    for (int c = 0; c < field.components; ++c) out.at(i, c) = r[c];
  }
  return out;
}

namespace {

// coarsest tiling whose every cell belongs to a or b (the pointwise-coarser
// of the two grids); reachable from both by coarsening alone
void meet_cells(const MeshMatrix& m, const Grid& a, const Grid& b, cell_line cell,
                std::vector<cell_line>& out) {
  if (a.contains(cell) || b.contains(cell)) {
    out.push_back(cell);
    return;
  }
  if (m.level_of(cell) >= m.bounds().level_max)
    throw GridMismatchError("l1_distance: grids do not tile a common domain");
  for (int s = 0; s < m.bounds().children(); ++s)
    meet_cells(m, a, b, m.daughter(cell, s), out);
}

}  // namespace

std::vector<double> l1_distance(const MeshMatrix& matrix, const Field& a, const Field& b) {
  if (a.grid.bounds() != b.grid.bounds())
    throw GridMismatchError("l1_distance: fields live on different bounds");
  if (a.components != b.components)
    throw std::invalid_argument("l1_distance: component count mismatch");

  std::vector<cell_line> common;
  const std::uint64_t roots = matrix.bounds().cells_on_level(matrix.bounds().level_min);
  for (std::uint64_t k = 1; k <= roots; ++k)
    meet_cells(matrix, a.grid, b.grid, matrix.line_of(matrix.bounds().level_min, k), common);
  const Grid meet = Grid::from_cells(matrix, std::move(common));

  const Field pa = project_down(matrix, a, meet);
  const Field pb = project_down(matrix, b, meet);
  std::vector<double> dist(static_cast<std::size_t>(a.components), 0.0);
  for (std::size_t i = 0; i < meet.size(); ++i) {
    const double vol = std::ldexp(1.0, -matrix.bounds().dim * matrix.level_of(meet.cells()[i]));
    for (int c = 0; c < a.components; ++c)
      dist[static_cast<std::size_t>(c)] += vol * std::abs(pa.at(i, c) - pb.at(i, c));
  }
  return dist;
}

std::vector<double> integrate(const MeshMatrix& matrix, const Field& field) {
  std::vector<double> total(static_cast<std::size_t>(field.components), 0.0);
  for (std::size_t i = 0; i < field.grid.size(); ++i) {
    const double vol =
        std::ldexp(1.0, -matrix.bounds().dim * matrix.level_of(field.grid.cells()[i]));
    for (int c = 0; c < field.components; ++c)
      total[static_cast<std::size_t>(c)] += vol * field.at(i, c);
  }
  return total;
}

}  // namespace rsm
