#pragma once

#include <cstdint>
#include <vector>

#include "rsm/field.hpp"
#include "rsm/grid.hpp"
#include "rsm/mesh_matrix.hpp"

namespace rsm {

struct Thresholds {
  double refine = 0.5;   // mark for refinement strictly above
  double coarsen = 0.5;  // mark for coarsening strictly below
  void validate() const;
};

// Per-cell monitor values aligned with Grid::cells().
struct MonitorResult {
  std::vector<double> values;
};

struct MarkSets {
  std::vector<cell_line> refine;   // sorted; excludes level_max cells
  std::vector<cell_line> coarsen;  // sorted; excludes level_min cells
};

// Strict threshold comparison: ties neither refine nor coarsen, so the two
// sets stay disjoint even when the thresholds coincide.
MarkSets mark(const MeshMatrix& matrix, const Grid& grid, const MonitorResult& monitor,
              Thresholds thresholds);

struct RefineResult {
  Grid grid;
  std::vector<cell_line> refined;  // closure of the marks, sorted
  // position in the old grid of each new cell's value source (itself, or the
  // refined mother it was cut from), aligned with grid.cells()
  std::vector<std::uint32_t> new_to_old;
};

// Refine the marked cells plus whatever the regularity bound forces, sweeping
// marks from the highest to the lowest level. Level_max marks are dropped.
RefineResult strong_refine(const MeshMatrix& matrix, const Grid& grid,
                           const std::vector<cell_line>& marks);

struct CoarsenResult {
  Grid grid;
  std::vector<cell_line> coarsened;  // the cells actually replaced, sorted
  // per new cell, the old positions feeding it: one entry for a carried-over
  // cell, the 2^d daughters in matrix slot order for a fresh mother
  std::vector<std::uint32_t> source_offset;  // size() + 1 entries
  std::vector<std::uint32_t> source_index;
};

// Coarsen only complete sibling groups whose members are all marked and whose
// removal keeps the level jumps within the regularity bound.
CoarsenResult weak_coarsen(const MeshMatrix& matrix, const Grid& grid,
                           const std::vector<cell_line>& marks);

struct MeshUpdateResult {
  Grid refined_grid;  // after strong refinement, before coarsening
  Grid grid;          // final grid
  std::vector<cell_line> refined;
  std::vector<cell_line> coarsened;
  std::vector<std::uint32_t> refine_new_to_old;    // old grid -> refined grid
  std::vector<std::uint32_t> coarsen_source_offset;  // refined grid -> final grid
  std::vector<std::uint32_t> coarsen_source_index;
};

// mark -> strong_refine -> weak_coarsen with the coarsening set restricted to
// cells that survived refinement. Debug builds re-validate the RSM contract
// after every call.
MeshUpdateResult mesh_update(const MeshMatrix& matrix, const Grid& grid,
                             const MonitorResult& monitor, Thresholds thresholds);

// One-pass value remap across a mesh update using the recorded
// correspondence; bit-identical to project_up onto the refined grid followed
// by project_down onto the final grid.
Field transfer_after_update(const Field& field, const MeshUpdateResult& update);

}  // namespace rsm
