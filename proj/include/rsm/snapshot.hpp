#pragma once

#include <string>
#include <vector>

#include "rsm/field.hpp"
#include "rsm/grid.hpp"
#include "rsm/mesh_matrix.hpp"

namespace rsm {

// One comma-separated record per cell:
//   line,level,center_x[,center_y],size[,value_1..value_n]
// Output is deterministic for identical inputs. I/O failures are reported
// with the path in the message.

void write_snapshot(const MeshMatrix& matrix, const Grid& grid, const std::string& path);

void write_snapshot(const MeshMatrix& matrix, const Field& field,
                    const std::vector<std::string>& component_names,
                    const std::string& path);

}  // namespace rsm
