#include "rsm/generic_experiments.hpp"

#include <cmath>

namespace rsm {

GenericRunConfig generic_defaults(GenericMonitor which) {
  GenericRunConfig c;
  c.which = which;
  switch (which) {
    case GenericMonitor::m1:
      c.bounds = {2, 5, 7, 1};
      c.thresholds = {0.8, 0.8};
      c.t_end = 0.8;
      c.snapshot_every = 0.4;
      break;
    case GenericMonitor::m2:
      c.bounds = {2, 3, 7, 1};
      c.thresholds = {0.8, 0.8};
      c.t_end = 1.0;
      c.snapshot_every = 0.25;
      break;
    case GenericMonitor::m3:
      c.bounds = {2, 3, 7, 1};
      c.thresholds = {0.8, 0.3};
      c.t_end = 1.0;
      c.snapshot_every = 0.25;
      break;
    default:
      c.bounds = {2, 3, 7, 1};
      c.thresholds = {0.5, 0.5};
      c.t_end = 2.0;
      c.snapshot_every = 0.5;
      break;
  }
  return c;
}

void run_generic(const MeshMatrix& matrix, const GenericRunConfig& config,
                 const std::function<void(double, int, const Grid&)>& on_grid) {
  config.thresholds.validate();
  Grid grid = Grid::uniform(matrix, matrix.bounds().level_min);
  const bool refine_only = config.which == GenericMonitor::m1;

  const long long steps = std::llround(config.t_end / config.dt);
  const long long every = config.snapshot_every > 0.0
                              ? std::llround(config.snapshot_every / config.dt)
                              : steps;

  for (long long n = 0; n <= steps; ++n) {
    const double t = static_cast<double>(n) * config.dt;
    const MonitorResult monitor = sample_monitor(matrix, grid, config.which, t);
    if (refine_only) {
      // monitor values are strictly positive, so a zero coarsening threshold
      // disables coarsening under the strict comparison
      MarkSets marks = mark(matrix, grid, monitor, {config.thresholds.refine, 0.0});
      grid = strong_refine(matrix, grid, marks.refine).grid;
    } else {
      grid = mesh_update(matrix, grid, monitor, config.thresholds).grid;
    }
    if (on_grid && (n == steps || (every > 0 && n % every == 0)))
      on_grid(t, 0, grid);
  }

  if (refine_only) {
    // two standalone weak coarsening passes at the frozen final time
    for (int pass = 1; pass <= 2; ++pass) {
      const MonitorResult monitor = sample_monitor(matrix, grid, config.which, config.t_end);
      MarkSets marks = mark(matrix, grid, monitor, {1.0, config.thresholds.coarsen});
      grid = weak_coarsen(matrix, grid, marks.coarsen).grid;
      if (on_grid) on_grid(config.t_end, pass, grid);
    }
  }
}

}  // namespace rsm
