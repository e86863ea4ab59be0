#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rsm/errors.hpp"
#include "rsm/grid.hpp"
#include "rsm/mesh_matrix.hpp"

namespace rsm {

enum class Direction : int { west = 0, east = 1, south = 2, north = 3 };

inline Direction opposite(Direction d) {
  switch (d) {
    case Direction::west: return Direction::east;
    case Direction::east: return Direction::west;
    case Direction::south: return Direction::north;
    default: return Direction::south;
  }
}

const char* to_string(Direction d);

// All 2^d daughters of mother(cell), including the cell itself, in matrix
// column order (NW,NE,SW,SE in 2D; left,right in 1D). Throws
// std::invalid_argument for level_min cells, which have no mother.
std::vector<cell_line> siblings(const MeshMatrix& matrix, cell_line cell);

struct SiblingPosition {
  Direction ew;  // west or east
  Direction ns;  // south or north
};

// 2D only; derived from the parity of the lexicographic decomposition of k.
SiblingPosition sibling_position(const MeshMatrix& matrix, cell_line cell);

// Neighbor on the uniform mesh of the same level; k_no_line past the domain
// boundary. South/north stride is one full row (2^l) of the level's grid.
cell_line same_level_neighbor(const MeshMatrix& matrix, cell_line cell, Direction dir);

struct NeighborRef {
  cell_line line;
  Direction dir;  // direction of the shared interface as seen from the query cell
};

// Geometric ratio |dC_i n dC_j| / |C_i| between a 2D cell of level_i and a
// face neighbor of level_j.
double interface_ratio(int level_i, int level_j);

namespace detail {

// Daughter slots of a queue entry that face back toward a cell searching in
// direction `dir` (e.g. the two west daughters for an east search).
inline std::array<int, 2> facing_slots(int dim, Direction dir) {
  if (dim == 1) return dir == Direction::east ? std::array<int, 2>{k_left, -1}
                                              : std::array<int, 2>{k_right, -1};
  switch (dir) {
    case Direction::east: return {k_nw, k_sw};
    case Direction::west: return {k_ne, k_se};
    case Direction::north: return {k_sw, k_se};
    default: return {k_nw, k_ne};
  }
}

// Core search: same-level candidate, then up to `max_up` mother generations,
// then a facing-daughter queue down to `down_limit_level`. Reports every grid
// member found; a queue entry that reaches the depth limit without membership
// means the tiling or regularity contract is broken.
template <class F>
void visit_direction_limited(const MeshMatrix& m, const Grid& g, cell_line cell,
                             Direction dir, int max_up, int down_limit_level, F&& fn) {
  const cell_line n = same_level_neighbor(m, cell, dir);
  if (n == k_no_line) return;  // domain boundary
  if (g.contains(n)) {
    fn(n, dir);
    return;
  }
  cell_line a = n;
  for (int gen = 0; gen < max_up; ++gen) {
    a = m.mother(a);
    if (a == k_no_line) break;
    if (g.contains(a)) {
      fn(a, dir);
      return;
    }
  }
  const auto slots = facing_slots(m.bounds().dim, dir);
  std::array<cell_line, 1024> queue;
  std::size_t head = 0, tail = 0;
  queue[tail++] = n;
  while (head < tail) {
    const cell_line q = queue[head++];
    if (g.contains(q)) {
      fn(q, dir);
      continue;
    }
    if (m.level_of(q) >= down_limit_level)
      throw InconsistentGridError("neighbor search exhausted " + std::string(to_string(dir)) +
                                  " of line " + std::to_string(cell) +
                                  ": no grid member covers the interface");
    for (int s : slots) {
      if (s < 0) continue;
      if (tail >= queue.size())
        throw InconsistentGridError("neighbor search queue overflow");
      queue[tail++] = m.daughter(q, s);
    }
  }
}

}  // namespace detail

// Visit the grid cells sharing a positive-measure interface with `cell` in
// one direction. The search exploits regularity: at most m_r generations of
// ancestors and m_r extra generations of descendants are examined.
template <class F>
void visit_direction(const MeshMatrix& m, const Grid& g, cell_line cell, Direction dir,
                     F&& fn) {
  const int level = m.level_of(cell);
  const int mr = m.bounds().regularity;
  const int down_limit = level + mr < m.bounds().level_max ? level + mr
                                                           : m.bounds().level_max;
  detail::visit_direction_limited(m, g, cell, dir, mr, down_limit, fn);
}

// All neighbors, direction order W, E, (S, N).
template <class F>
void visit_neighbors(const MeshMatrix& m, const Grid& g, cell_line cell, F&& fn) {
  const int ndir = m.bounds().dim == 1 ? 2 : 4;
  for (int d = 0; d < ndir; ++d)
    visit_direction(m, g, cell, static_cast<Direction>(d), fn);
}

std::vector<NeighborRef> neighbors_in_grid(const MeshMatrix& matrix, const Grid& grid,
                                           cell_line cell);

}  // namespace rsm
