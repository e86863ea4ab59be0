#include "rsm/topology.hpp"

#include <cmath>
#include <stdexcept>

namespace rsm {

const char* to_string(Direction d) {
  switch (d) {
    case Direction::west: return "W";
    case Direction::east: return "E";
    case Direction::south: return "S";
    default: return "N";
  }
}

std::vector<cell_line> siblings(const MeshMatrix& matrix, cell_line cell) {
  const cell_line m = matrix.mother(cell);
  if (m == k_no_line)
    throw std::invalid_argument("siblings: cell at level_min has no mother");
  std::vector<cell_line> out;
  out.reserve(static_cast<std::size_t>(matrix.bounds().children()));
  for (int s = 0; s < matrix.bounds().children(); ++s) out.push_back(matrix.daughter(m, s));
  return out;
}

SiblingPosition sibling_position(const MeshMatrix& matrix, cell_line cell) {
  if (matrix.bounds().dim != 2)
    throw std::invalid_argument("sibling_position: defined for dim == 2 only");
  if (matrix.mother(cell) == k_no_line)
    throw std::invalid_argument("sibling_position: cell at level_min has no mother");
  const auto [level, k] = matrix.level_and_index_of(cell);
  const auto [k1, k2] = matrix.split_index(level, k);
  SiblingPosition p;
  p.ew = (k1 % 2 == 1) ? Direction::west : Direction::east;
  p.ns = (k2 % 2 == 1) ? Direction::south : Direction::north;
  return p;
}

cell_line same_level_neighbor(const MeshMatrix& matrix, cell_line cell, Direction dir) {
  const auto [level, k] = matrix.level_and_index_of(cell);
  const std::uint64_t width = std::uint64_t{1} << level;
  const auto [k1, k2] = matrix.split_index(level, k);
  switch (dir) {
    case Direction::west:
      return k1 > 1 ? matrix.line_of(level, k - 1) : k_no_line;
    case Direction::east:
      return k1 < width ? matrix.line_of(level, k + 1) : k_no_line;
    case Direction::south:
      if (matrix.bounds().dim != 2)
        throw std::invalid_argument("same_level_neighbor: S/N need dim == 2");
      return k2 > 1 ? matrix.line_of(level, k - width) : k_no_line;
    default:
      if (matrix.bounds().dim != 2)
        throw std::invalid_argument("same_level_neighbor: S/N need dim == 2");
      return k2 < width ? matrix.line_of(level, k + width) : k_no_line;
  }
}

double interface_ratio(int level_i, int level_j) {
  const int lmax = level_i > level_j ? level_i : level_j;
  return std::ldexp(1.0, 2 * level_i - lmax);
}

std::vector<NeighborRef> neighbors_in_grid(const MeshMatrix& matrix, const Grid& grid,
                                           cell_line cell) {
  if (!grid.contains(cell))
    throw std::invalid_argument("neighbors_in_grid: cell not in grid");
  std::vector<NeighborRef> out;
  visit_neighbors(matrix, grid, cell,
                  [&](cell_line n, Direction d) { out.push_back({n, d}); });
  return out;
}

}  // namespace rsm
