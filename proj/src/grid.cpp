#include "rsm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rsm/errors.hpp"
#include "rsm/topology.hpp"

namespace rsm {

Grid Grid::uniform(const MeshMatrix& matrix, int level) {
  if (level < matrix.bounds().level_min || level > matrix.bounds().level_max)
    throw std::invalid_argument("Grid::uniform: level outside bounds");
  std::vector<cell_line> cells;
  const std::uint64_t count = matrix.bounds().cells_on_level(level);
  cells.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t k = 1; k <= count; ++k) cells.push_back(matrix.line_of(level, k));
  return from_cells(matrix, std::move(cells));
}

Grid Grid::from_cells(const MeshMatrix& matrix, std::vector<cell_line> cells) {
  Grid g;
  g.bounds_ = matrix.bounds();
  std::sort(cells.begin(), cells.end());
  g.member_.assign(static_cast<std::size_t>(matrix.line_count()) + 1, false);
  cell_line prev = k_no_line;
  for (cell_line c : cells) {
    if (c == k_no_line || c > matrix.line_count())
      throw std::invalid_argument("Grid::from_cells: line out of range");
    if (c == prev) throw std::invalid_argument("Grid::from_cells: duplicate line");
    g.member_[c] = true;
    prev = c;
  }
  g.cells_ = std::move(cells);
  return g;
}

std::size_t Grid::index_of(cell_line line) const {
  const auto it = std::lower_bound(cells_.begin(), cells_.end(), line);
  if (it == cells_.end() || *it != line)
    throw std::out_of_range("Grid::index_of: line not in grid");
  return static_cast<std::size_t>(it - cells_.begin());
}

double tiling_sum(const MeshMatrix& matrix, const Grid& grid) {
  double sum = 0.0;
  for (cell_line c : grid.cells())
    sum += std::ldexp(1.0, -matrix.bounds().dim * matrix.level_of(c));
  return sum;
}

void validate_rsm(const MeshMatrix& matrix, const Grid& grid) {
  const RefinementBounds& b = matrix.bounds();
  if (grid.bounds() != b)
    throw InconsistentGridError("validate_rsm: grid bounds do not match matrix");
  if (grid.empty()) throw InconsistentGridError("validate_rsm: empty grid");

  // exact tiling: volumes sum to the unit domain in integer arithmetic
  const std::uint64_t target = std::uint64_t{1} << (b.dim * b.level_max);
  std::uint64_t sum = 0;
  for (cell_line c : grid.cells()) {
    const int l = matrix.level_of(c);
    sum += std::uint64_t{1} << (b.dim * (b.level_max - l));
    if (sum > target)
      throw InconsistentGridError("validate_rsm: cell volumes exceed the unit domain");
  }
  if (sum != target)
    throw InconsistentGridError("validate_rsm: cell volumes do not cover the unit domain");

  // no cell may coexist with one of its ancestors
  for (cell_line c : grid.cells()) {
    for (cell_line a = matrix.mother(c); a != k_no_line; a = matrix.mother(a))
      if (grid.contains(a))
        throw InconsistentGridError("validate_rsm: ancestor/descendant pair present");
  }

  // regularity over every interface; the search here is bounded only by
  // level_max so it does not presuppose the property it checks
  const int ndir = b.dim == 1 ? 2 : 4;
  for (cell_line c : grid.cells()) {
    const int lc = matrix.level_of(c);
    for (int d = 0; d < ndir; ++d) {
      detail::visit_direction_limited(
          matrix, grid, c, static_cast<Direction>(d), lc - b.level_min, b.level_max,
          [&](cell_line n, Direction) {
            const int ln = matrix.level_of(n);
            const int jump = ln > lc ? ln - lc : lc - ln;
            if (jump > b.regularity)
              throw InconsistentGridError(
                  "validate_rsm: level jump " + std::to_string(jump) + " exceeds regularity " +
                  std::to_string(b.regularity));
          });
    }
  }
}

}  // namespace rsm
