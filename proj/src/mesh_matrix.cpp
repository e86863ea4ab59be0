#include "rsm/mesh_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace rsm {

void RefinementBounds::validate() const {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("RefinementBounds: dim must be 1 or 2");
  if (level_min < 0 || level_max < level_min)
    throw std::invalid_argument("RefinementBounds: need 0 <= level_min <= level_max");
  if (level_max > 30)
    throw std::invalid_argument("RefinementBounds: level_max > 30 not supported");
  if (regularity < 1 || regularity > 8)
    throw std::invalid_argument("RefinementBounds: regularity must be in [1, 8]");
}

std::uint64_t RefinementBounds::cells_on_level(int level) const {
  return std::uint64_t{1} << (dim * level);
}

std::uint64_t RefinementBounds::total_lines() const {
  std::uint64_t total = 0;
  for (int l = level_min; l <= level_max; ++l) total += cells_on_level(l);
  return total;
}

MatrixFootprint entry_count_and_memory(const RefinementBounds& bounds, MatrixLayout layout) {
  bounds.validate();
  MatrixFootprint fp;
  fp.lines = bounds.total_lines();
  const std::uint64_t columns = 3 + (std::uint64_t{1} << bounds.dim);
  fp.entries = fp.lines * columns;
  if (layout == MatrixLayout::no_edge_columns || layout == MatrixLayout::no_kl_columns) {
    // level_min rows have no mother entry, level_max rows no daughter entries
    fp.entries -= bounds.cells_on_level(bounds.level_min);
    fp.entries -= bounds.cells_on_level(bounds.level_max) * (std::uint64_t{1} << bounds.dim);
  }
  if (layout == MatrixLayout::no_kl_columns) fp.entries -= 2 * fp.lines;
  fp.bytes = 4 * fp.entries;
  return fp;
}

std::string format_bytes(std::uint64_t bytes) {
  char buf[32];
  if (bytes < 1000000ull) {
    std::snprintf(buf, sizeof buf, "%llu KB",
                  static_cast<unsigned long long>((bytes + 500) / 1000));
  } else {
    std::snprintf(buf, sizeof buf, "%llu MB",
                  static_cast<unsigned long long>((bytes + 500000) / 1000000));
  }
  return buf;
}

MeshMatrix::MeshMatrix(const RefinementBounds& bounds) : bounds_(bounds) {
  bounds_.validate();
  stride_ = 3 + bounds_.children();

  level_offset_.assign(static_cast<std::size_t>(bounds_.level_max - bounds_.level_min) + 2, 0);
  std::uint64_t total = 0;
  for (int l = bounds_.level_min; l <= bounds_.level_max; ++l) {
    level_offset_[static_cast<std::size_t>(l - bounds_.level_min)] = total;
    total += bounds_.cells_on_level(l);
  }
  level_offset_.back() = total;
  if (total > std::numeric_limits<cell_line>::max() - 1)
    throw std::length_error("MeshMatrix: bounds exceed the 32-bit line capacity");
  line_count_ = static_cast<cell_line>(total);

  data_.assign(static_cast<std::size_t>(total) * stride_, 0);
  for (int l = bounds_.level_min; l <= bounds_.level_max; ++l) {
    const std::uint64_t width = std::uint64_t{1} << l;  // cells per row at this level
    const std::uint64_t count = bounds_.cells_on_level(l);
    const std::uint64_t base = level_offset_[static_cast<std::size_t>(l - bounds_.level_min)];
    for (std::uint64_t k = 1; k <= count; ++k) {
      std::uint32_t* r = &data_[static_cast<std::size_t>(base + k - 1) * stride_];
      r[0] = static_cast<std::uint32_t>(k);
      r[1] = static_cast<std::uint32_t>(l);
      if (l > bounds_.level_min) {
        std::uint64_t km;
        if (bounds_.dim == 1) {
          km = (k + 1) / 2;
        } else {
          const std::uint64_t k1 = (k - 1) % width + 1;
          const std::uint64_t k2 = (k - 1) / width + 1;
          km = ((k2 + 1) / 2 - 1) * (width / 2) + (k1 + 1) / 2;
        }
        r[2] = static_cast<std::uint32_t>(line_of(l - 1, km));
      }
      if (l < bounds_.level_max) {
        if (bounds_.dim == 1) {
          r[3 + k_left] = static_cast<std::uint32_t>(line_of(l + 1, 2 * k - 1));
          r[3 + k_right] = static_cast<std::uint32_t>(line_of(l + 1, 2 * k));
        } else {
          const std::uint64_t k1 = (k - 1) % width + 1;
          const std::uint64_t k2 = (k - 1) / width + 1;
          const std::uint64_t w2 = 2 * width;
          r[3 + k_nw] = static_cast<std::uint32_t>(line_of(l + 1, (2 * k2 - 1) * w2 + 2 * k1 - 1));
          r[3 + k_ne] = static_cast<std::uint32_t>(line_of(l + 1, (2 * k2 - 1) * w2 + 2 * k1));
          r[3 + k_sw] = static_cast<std::uint32_t>(line_of(l + 1, (2 * k2 - 2) * w2 + 2 * k1 - 1));
          r[3 + k_se] = static_cast<std::uint32_t>(line_of(l + 1, (2 * k2 - 2) * w2 + 2 * k1));
        }
      }
    }
  }
}

void MeshMatrix::check_line(cell_line line) const {
  if (line == k_no_line || line > line_count_)
    throw std::out_of_range("MeshMatrix: line index out of range");
}

const std::uint32_t* MeshMatrix::row(cell_line line) const {
  check_line(line);
  return &data_[static_cast<std::size_t>(line - 1) * stride_];
}

cell_line MeshMatrix::line_of(int level, std::uint64_t k) const {
  if (level < bounds_.level_min || level > bounds_.level_max)
    throw std::out_of_range("MeshMatrix::line_of: level out of range");
  if (k < 1 || k > bounds_.cells_on_level(level))
    throw std::out_of_range("MeshMatrix::line_of: intra-level index out of range");
  return static_cast<cell_line>(
      level_offset_[static_cast<std::size_t>(level - bounds_.level_min)] + k);
}

std::pair<int, std::uint64_t> MeshMatrix::level_and_index_of(cell_line line) const {
  check_line(line);
  // recover (l, k) from the line index alone: smallest level with offset < line
  const auto it = std::upper_bound(level_offset_.begin(), level_offset_.end() - 1,
                                   static_cast<std::uint64_t>(line - 1));
  const int level = bounds_.level_min + static_cast<int>(it - level_offset_.begin()) - 1;
  const std::uint64_t k =
      line - level_offset_[static_cast<std::size_t>(level - bounds_.level_min)];
  return {level, k};
}

int MeshMatrix::level_of(cell_line line) const { return static_cast<int>(row(line)[1]); }

std::uint64_t MeshMatrix::intra_index_of(cell_line line) const { return row(line)[0]; }

cell_line MeshMatrix::mother(cell_line line) const { return row(line)[2]; }

cell_line MeshMatrix::daughter(cell_line line, int slot) const {
  if (slot < 0 || slot >= bounds_.children())
    throw std::out_of_range("MeshMatrix::daughter: bad slot");
  return row(line)[3 + slot];
}

std::array<cell_line, 4> MeshMatrix::daughters(cell_line line) const {
  const std::uint32_t* r = row(line);
  std::array<cell_line, 4> out{k_no_line, k_no_line, k_no_line, k_no_line};
  for (int s = 0; s < bounds_.children(); ++s) out[static_cast<std::size_t>(s)] = r[3 + s];
  return out;
}

std::pair<std::uint64_t, std::uint64_t> MeshMatrix::split_index(int level,
                                                                std::uint64_t k) const {
  if (bounds_.dim == 1) return {k, 1};
  const std::uint64_t width = std::uint64_t{1} << level;
  return {(k - 1) % width + 1, (k - 1) / width + 1};
}

std::uint64_t MeshMatrix::join_index(int level, std::uint64_t k1, std::uint64_t k2) const {
  if (bounds_.dim == 1) return k1;
  return (k2 - 1) * (std::uint64_t{1} << level) + k1;
}

CellGeometry MeshMatrix::geometry(cell_line line) const {
  const auto [level, k] = level_and_index_of(line);
  const auto [k1, k2] = split_index(level, k);
  CellGeometry g;
  const double half_h = std::ldexp(1.0, -(level + 1));
  g.center[0] = static_cast<double>(2 * k1 - 1) * half_h;
  g.center[1] = bounds_.dim == 2 ? static_cast<double>(2 * k2 - 1) * half_h : 0.0;
  g.size = std::ldexp(1.0, -level);
  return g;
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xffu),
                        static_cast<unsigned char>((v >> 8) & 0xffu),
                        static_cast<unsigned char>((v >> 16) & 0xffu),
                        static_cast<unsigned char>((v >> 24) & 0xffu)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw std::runtime_error("MeshMatrix::load: truncated stream");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void MeshMatrix::dump(std::ostream& out) const {
  put_u32(out, static_cast<std::uint32_t>(bounds_.dim));
  put_u32(out, static_cast<std::uint32_t>(bounds_.level_min));
  put_u32(out, static_cast<std::uint32_t>(bounds_.level_max));
  put_u32(out, line_count_);
  for (std::uint32_t v : data_) put_u32(out, v);
  if (!out) throw std::runtime_error("MeshMatrix::dump: write failed");
}

MeshMatrix MeshMatrix::load(std::istream& in, int regularity) {
  RefinementBounds b;
  b.dim = static_cast<int>(get_u32(in));
  b.level_min = static_cast<int>(get_u32(in));
  b.level_max = static_cast<int>(get_u32(in));
  b.regularity = regularity;
  const std::uint32_t lines = get_u32(in);
  b.validate();
  if (lines != b.total_lines())
    throw std::runtime_error("MeshMatrix::load: header line count mismatch");
  MeshMatrix m(b);
  for (std::uint32_t& v : m.data_) v = get_u32(in);
  return m;
}

}  // namespace rsm
