#include "rsm/adaptation.hpp"

#include <algorithm>
#include <stdexcept>

#include "rsm/topology.hpp"

namespace rsm {

void Thresholds::validate() const {
  if (!(refine >= 0.0 && refine <= 1.0) || !(coarsen >= 0.0 && coarsen <= 1.0))
    throw std::invalid_argument("Thresholds: values must lie in [0, 1]");
  if (coarsen > refine)
    throw std::invalid_argument("Thresholds: coarsen must not exceed refine");
}

MarkSets mark(const MeshMatrix& matrix, const Grid& grid, const MonitorResult& monitor,
              Thresholds thresholds) {
  thresholds.validate();
  if (monitor.values.size() != grid.size())
    throw std::invalid_argument("mark: monitor not aligned with grid");
  MarkSets out;
  const int lmin = matrix.bounds().level_min;
  const int lmax = matrix.bounds().level_max;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cell_line c = grid.cells()[i];
    const double v = monitor.values[i];
    const int l = matrix.level_of(c);
    if (v > thresholds.refine && l < lmax) out.refine.push_back(c);
    else if (v < thresholds.coarsen && l > lmin) out.coarsen.push_back(c);
  }
  return out;
}

namespace {

// marks bucketed by level; grid membership enforced, edge levels dropped on request
std::vector<std::vector<cell_line>> bucket_by_level(const MeshMatrix& m, const Grid& g,
                                                    const std::vector<cell_line>& marks,
                                                    bool drop_level_max,
                                                    bool drop_level_min) {
  const int lmin = m.bounds().level_min;
  const int lmax = m.bounds().level_max;
  std::vector<std::vector<cell_line>> buckets(static_cast<std::size_t>(lmax - lmin) + 1);
  for (cell_line c : marks) {
    if (!g.contains(c)) throw std::invalid_argument("adaptation: mark outside grid");
    const int l = m.level_of(c);
    if (drop_level_max && l == lmax) continue;
    if (drop_level_min && l == lmin) continue;
    buckets[static_cast<std::size_t>(l - lmin)].push_back(c);
  }
  for (auto& b : buckets) std::sort(b.begin(), b.end());
  return buckets;
}

}  // namespace

RefineResult strong_refine(const MeshMatrix& matrix, const Grid& grid,
                           const std::vector<cell_line>& marks) {
  const int lmin = matrix.bounds().level_min;
  const int lmax = matrix.bounds().level_max;
  const int mr = matrix.bounds().regularity;

  auto buckets = bucket_by_level(matrix, grid, marks, /*drop_level_max=*/true,
                                 /*drop_level_min=*/false);
  std::vector<bool> in_set(static_cast<std::size_t>(matrix.line_count()) + 1, false);
  for (const auto& b : buckets)
    for (cell_line c : b) in_set[c] = true;

  // highest to lowest level; a marked cell drags every neighbor sitting
  // exactly m_r levels below it into the set, which cascades downward only
  for (int l = lmax - 1; l >= lmin; --l) {
    auto& bucket = buckets[static_cast<std::size_t>(l - lmin)];
    std::sort(bucket.begin(), bucket.end());
    for (std::size_t i = 0; i < bucket.size(); ++i) {
      const cell_line c = bucket[i];
      visit_neighbors(matrix, grid, c, [&](cell_line n, Direction) {
        if (in_set[n]) return;
        if (l - matrix.level_of(n) == mr) {
          in_set[n] = true;
          buckets[static_cast<std::size_t>(matrix.level_of(n) - lmin)].push_back(n);
        }
      });
    }
  }

  RefineResult out;
  std::vector<std::pair<cell_line, std::uint32_t>> next;  // (line, old position)
  next.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cell_line c = grid.cells()[i];
    if (in_set[c]) {
      out.refined.push_back(c);
      for (int s = 0; s < matrix.bounds().children(); ++s)
        next.emplace_back(matrix.daughter(c, s), static_cast<std::uint32_t>(i));
    } else {
      next.emplace_back(c, static_cast<std::uint32_t>(i));
    }
  }
  std::sort(next.begin(), next.end());
  std::vector<cell_line> cells;
  cells.reserve(next.size());
  out.new_to_old.reserve(next.size());
  for (const auto& [line, old_pos] : next) {
    cells.push_back(line);
    out.new_to_old.push_back(old_pos);
  }
  out.grid = Grid::from_cells(matrix, std::move(cells));
  return out;
}

CoarsenResult weak_coarsen(const MeshMatrix& matrix, const Grid& grid,
                           const std::vector<cell_line>& marks) {
  const int mr = matrix.bounds().regularity;

  auto buckets = bucket_by_level(matrix, grid, marks, /*drop_level_max=*/false,
                                 /*drop_level_min=*/true);
  std::vector<bool> marked(static_cast<std::size_t>(matrix.line_count()) + 1, false);
  for (const auto& b : buckets)
    for (cell_line c : b) marked[c] = true;

  // a cell with a neighbor exactly m_r levels above cannot coarsen; the check
  // reads only the (static) input grid, so sweep order does not matter
  for (int bi = static_cast<int>(buckets.size()) - 1; bi >= 0; --bi) {
    for (cell_line c : buckets[static_cast<std::size_t>(bi)]) {
      const int lc = matrix.level_of(c);
      bool blocked = false;
      visit_neighbors(matrix, grid, c, [&](cell_line n, Direction) {
        if (matrix.level_of(n) - lc == mr) blocked = true;
      });
      if (blocked) marked[c] = false;
    }
  }

  // keep only complete sibling groups that are fully present and fully marked
  CoarsenResult out;
  std::vector<cell_line> next;
  std::vector<bool> coarsen(static_cast<std::size_t>(matrix.line_count()) + 1, false);
  for (const auto& bucket : buckets) {
    for (cell_line c : bucket) {
      if (!marked[c] || coarsen[c]) continue;
      const cell_line mom = matrix.mother(c);
      bool ok = true;
      for (int s = 0; s < matrix.bounds().children(); ++s) {
        const cell_line sib = matrix.daughter(mom, s);
        if (!grid.contains(sib) || !marked[sib]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      for (int s = 0; s < matrix.bounds().children(); ++s)
        coarsen[matrix.daughter(mom, s)] = true;
    }
  }

  next.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cell_line c = grid.cells()[i];
    if (coarsen[c]) {
      out.coarsened.push_back(c);
      // emit the mother exactly once per group
      if (matrix.daughter(matrix.mother(c), 0) == c) next.push_back(matrix.mother(c));
    } else {
      next.push_back(c);
    }
  }
  out.grid = Grid::from_cells(matrix, std::move(next));

  // value sources per new cell: itself, or its daughters in slot order
  out.source_offset.reserve(out.grid.size() + 1);
  out.source_offset.push_back(0);
  for (cell_line c : out.grid.cells()) {
    if (grid.contains(c)) {
      out.source_index.push_back(static_cast<std::uint32_t>(grid.index_of(c)));
    } else {
      for (int s = 0; s < matrix.bounds().children(); ++s)
        out.source_index.push_back(
            static_cast<std::uint32_t>(grid.index_of(matrix.daughter(c, s))));
    }
    out.source_offset.push_back(static_cast<std::uint32_t>(out.source_index.size()));
  }
  return out;
}

MeshUpdateResult mesh_update(const MeshMatrix& matrix, const Grid& grid,
                             const MonitorResult& monitor, Thresholds thresholds) {
  MarkSets marks = mark(matrix, grid, monitor, thresholds);
  RefineResult r = strong_refine(matrix, grid, marks.refine);

  // only cells that survived refinement stay eligible for coarsening
  std::vector<cell_line> coarsen_marks;
  coarsen_marks.reserve(marks.coarsen.size());
  std::set_difference(marks.coarsen.begin(), marks.coarsen.end(), r.refined.begin(),
                      r.refined.end(), std::back_inserter(coarsen_marks));

  CoarsenResult c = weak_coarsen(matrix, r.grid, coarsen_marks);

  MeshUpdateResult out;
  out.refined_grid = std::move(r.grid);
  out.grid = std::move(c.grid);
  out.refined = std::move(r.refined);
  out.coarsened = std::move(c.coarsened);
  out.refine_new_to_old = std::move(r.new_to_old);
  out.coarsen_source_offset = std::move(c.source_offset);
  out.coarsen_source_index = std::move(c.source_index);
#ifndef NDEBUG
  validate_rsm(matrix, out.grid);
#endif
  return out;
}

Field transfer_after_update(const Field& field, const MeshUpdateResult& update) {
  if (update.refine_new_to_old.size() != update.refined_grid.size() ||
      update.coarsen_source_offset.size() != update.grid.size() + 1)
    throw std::invalid_argument("transfer_after_update: inconsistent update record");
  for (std::uint32_t old_pos : update.refine_new_to_old)
    if (old_pos >= field.grid.size())
      throw std::invalid_argument("transfer_after_update: field does not match the update");
  const int nc = field.components;

  // injection onto the refined grid
  Field mid(update.refined_grid, nc);
  for (std::size_t i = 0; i < update.refined_grid.size(); ++i) {
    const double* src = field.row(update.refine_new_to_old[i]);
    double* dst = mid.row(i);
    for (int k = 0; k < nc; ++k) dst[k] = src[k];
  }

  // exact averaging onto the final grid; fresh mothers combine their four
  // daughters with the same diagonal pairing as project_down
  Field out(update.grid, nc);
  for (std::size_t i = 0; i < update.grid.size(); ++i) {
    const std::uint32_t begin = update.coarsen_source_offset[i];
    const std::uint32_t count = update.coarsen_source_offset[i + 1] - begin;
    double* dst = out.row(i);
    if (count == 1) {
      const double* src = mid.row(update.coarsen_source_index[begin]);
      for (int k = 0; k < nc; ++k) dst[k] = src[k];
    } else if (count == 2) {
      const double* a = mid.row(update.coarsen_source_index[begin]);
      const double* b = mid.row(update.coarsen_source_index[begin + 1]);
      for (int k = 0; k < nc; ++k) dst[k] = 0.5 * (a[k] + b[k]);
    } else {
      const double* nw = mid.row(update.coarsen_source_index[begin + k_nw]);
      const double* ne = mid.row(update.coarsen_source_index[begin + k_ne]);
      const double* sw = mid.row(update.coarsen_source_index[begin + k_sw]);
      const double* se = mid.row(update.coarsen_source_index[begin + k_se]);
      for (int k = 0; k < nc; ++k) dst[k] = 0.25 * ((nw[k] + se[k]) + (ne[k] + sw[k]));
    }
  }
  return out;
}

}  // namespace rsm
