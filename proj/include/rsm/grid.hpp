#pragma once

#include <cstddef>
#include <vector>

#include "rsm/mesh_matrix.hpp"

namespace rsm {

// A conforming tiling of [0,1]^d by matrix lines, kept sorted by line index.
// Membership is O(1); mutation happens only by constructing a new Grid.
class Grid {
 public:
  Grid() = default;

  static Grid uniform(const MeshMatrix& matrix, int level);
  // Sorts the cells; duplicate or out-of-range lines are rejected.
  static Grid from_cells(const MeshMatrix& matrix, std::vector<cell_line> cells);

  const RefinementBounds& bounds() const { return bounds_; }
  const std::vector<cell_line>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  bool contains(cell_line line) const {
    return line < member_.size() && member_[line];
  }
  // Position of `line` inside cells(); throws std::out_of_range if absent.
  std::size_t index_of(cell_line line) const;

 private:
  RefinementBounds bounds_{};
  std::vector<cell_line> cells_;
  std::vector<bool> member_;  // indexed by line, size line_count + 1
};

// Full RSM contract: every level within bounds, exact tiling of the unit
// domain with no ancestor/descendant pair, and |L(C1)-L(C2)| <= regularity
// for every neighbor pair. Throws InconsistentGridError with a description.
void validate_rsm(const MeshMatrix& matrix, const Grid& grid);

// Sum of cell volumes 2^(-d*L); exactly 1 on a valid tiling.
double tiling_sum(const MeshMatrix& matrix, const Grid& grid);

}  // namespace rsm
