#pragma once

#include <cstddef>
#include <vector>

#include "rsm/grid.hpp"
#include "rsm/mesh_matrix.hpp"

namespace rsm {

// Per-cell averages aligned with Grid::cells(), one row of `components`
// doubles per cell. Value-like: cheap to copy, safe to read concurrently.
struct Field {
  Field() = default;
  Field(Grid grid, int components, double fill = 0.0);

  Grid grid;
  int components = 1;
  std::vector<double> values;  // cell-major

  double& at(std::size_t cell_index, int component) {
    return values[cell_index * static_cast<std::size_t>(components) +
                  static_cast<std::size_t>(component)];
  }
  double at(std::size_t cell_index, int component) const {
    return values[cell_index * static_cast<std::size_t>(components) +
                  static_cast<std::size_t>(component)];
  }
  const double* row(std::size_t cell_index) const {
    return &values[cell_index * static_cast<std::size_t>(components)];
  }
  double* row(std::size_t cell_index) {
    return &values[cell_index * static_cast<std::size_t>(components)];
  }
};

// Exact volume-weighted averaging onto a grid reachable from field.grid by
// coarsening alone; preserves the integral to rounding.
Field project_down(const MeshMatrix& matrix, const Field& field, const Grid& target);

// Piecewise-constant injection onto a grid reachable by refinement alone;
// every target cell copies itself or its unique source ancestor.
Field project_up(const MeshMatrix& matrix, const Field& field, const Grid& target);

// Per-component discrete L1 distance: the finer representation is projected
// onto the common coarsening of both grids before differencing.
std::vector<double> l1_distance(const MeshMatrix& matrix, const Field& a, const Field& b);

// Per-component integral sum |C| * U_C.
std::vector<double> integrate(const MeshMatrix& matrix, const Field& field);

}  // namespace rsm
