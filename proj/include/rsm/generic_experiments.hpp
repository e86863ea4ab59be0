#pragma once

#include <functional>

#include "rsm/adaptation.hpp"
#include "rsm/grid.hpp"
#include "rsm/mesh_matrix.hpp"
#include "rsm/monitors.hpp"

namespace rsm {

struct GenericRunConfig {
  GenericMonitor which = GenericMonitor::m1;
  RefinementBounds bounds{2, 5, 7, 1};
  Thresholds thresholds{0.8, 0.8};
  double dt = 0.005;
  double t_end = 0.8;
  double snapshot_every = 0.4;  // 0 = final grid only
};

// Documented defaults per monitor: m1 sweeps l in [5,7]; m2..m4 run on
// l in [3,7] with thresholds 0.8/0.8, 0.8/0.3 and 0.5/0.5 respectively.
GenericRunConfig generic_defaults(GenericMonitor which);

// m1: refinement-only sweep over [0, t_end], then two standalone weak
// coarsening passes at the final time (reported with pass = 1, 2).
// m2/m3/m4: full refine+coarsen mesh update every step (pass = 0 throughout).
// on_grid(t, pass, grid) fires at the snapshot cadence and at the end.
void run_generic(const MeshMatrix& matrix, const GenericRunConfig& config,
                 const std::function<void(double, int, const Grid&)>& on_grid);

}  // namespace rsm
