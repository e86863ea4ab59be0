#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace rsm {

// 1-based line index into the mesh matrix; 0 encodes "no such cell".
using cell_line = std::uint32_t;
inline constexpr cell_line k_no_line = 0;

// Daughter column order within a matrix row.
inline constexpr int k_nw = 0;  // 2D
inline constexpr int k_ne = 1;
inline constexpr int k_sw = 2;
inline constexpr int k_se = 3;
inline constexpr int k_left = 0;  // 1D
inline constexpr int k_right = 1;

struct RefinementBounds {
  int dim = 2;         // spatial dimension d, 1 or 2
  int level_min = 0;   // coarsest refinement level
  int level_max = 0;   // finest refinement level
  int regularity = 1;  // m_r: max level jump across any interface

  void validate() const;  // throws std::invalid_argument
  int children() const { return 1 << dim; }
  std::uint64_t cells_on_level(int level) const;
  std::uint64_t total_lines() const;
  bool operator==(const RefinementBounds&) const = default;
};

struct CellGeometry {
  std::array<double, 2> center{0.0, 0.0};  // center[1] is 0 in 1D
  double size = 1.0;                       // edge length 2^-l
};

enum class MatrixLayout { full, no_edge_columns, no_kl_columns };

struct MatrixFootprint {
  std::uint64_t lines = 0;
  std::uint64_t entries = 0;
  std::uint64_t bytes = 0;  // at 4 bytes per entry
};

// Entry/byte accounting for the chosen storage layout. Works for any valid
// bounds, independent of whether the matrix itself is buildable in memory.
MatrixFootprint entry_count_and_memory(const RefinementBounds& bounds, MatrixLayout layout);

// "20 KB" / "39 MB" style formatting, decimal units rounded to integers.
std::string format_bytes(std::uint64_t bytes);

// Flat matrix over all cells of all uniform dyadic grids between level_min
// and level_max. Each line stores (k, l, mother, daughters...); geometry and
// ancestry are recoverable from the line index alone. Immutable after
// construction and safe for concurrent reads.
class MeshMatrix {
 public:
  explicit MeshMatrix(const RefinementBounds& bounds);

  const RefinementBounds& bounds() const { return bounds_; }
  cell_line line_count() const { return line_count_; }
  int columns() const { return stride_; }

  // line <-> (level, intra-level index), both 1-based in k.
  cell_line line_of(int level, std::uint64_t k) const;
  std::pair<int, std::uint64_t> level_and_index_of(cell_line line) const;
  int level_of(cell_line line) const;
  std::uint64_t intra_index_of(cell_line line) const;

  cell_line mother(cell_line line) const;            // k_no_line at level_min
  cell_line daughter(cell_line line, int slot) const;  // k_no_line at level_max
  std::array<cell_line, 4> daughters(cell_line line) const;

  CellGeometry geometry(cell_line line) const;

  // Lexicographic decomposition k = (k2-1)*2^l + k1 with x varying fastest.
  // In 1D k2 is reported as 1.
  std::pair<std::uint64_t, std::uint64_t> split_index(int level, std::uint64_t k) const;
  std::uint64_t join_index(int level, std::uint64_t k1, std::uint64_t k2) const;

  // Binary cache: header (d, l_min, l_max, line count) then row-major 4-byte
  // little-endian entries. The regularity parameter is not part of the file
  // and must be supplied on load.
  void dump(std::ostream& out) const;
  static MeshMatrix load(std::istream& in, int regularity);

 private:
  MeshMatrix() = default;
  void check_line(cell_line line) const;
  const std::uint32_t* row(cell_line line) const;

  RefinementBounds bounds_{};
  int stride_ = 0;
  cell_line line_count_ = 0;
  std::vector<std::uint64_t> level_offset_;  // lines before each level, plus total
  std::vector<std::uint32_t> data_;
};

}  // namespace rsm
