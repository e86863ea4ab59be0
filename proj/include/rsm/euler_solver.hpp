#pragma once

#include <array>
#include <functional>

#include "rsm/adaptation.hpp"
#include "rsm/field.hpp"
#include "rsm/grid.hpp"
#include "rsm/mesh_matrix.hpp"
#include "rsm/monitors.hpp"

namespace rsm::euler {

// Conservative state per cell; field component order rho, mom_x, mom_y, E.
struct State {
  double rho = 0.0;
  double mom_x = 0.0;
  double mom_y = 0.0;
  double energy = 0.0;
};

struct SchemeConfig {
  double gamma = 1.4;
  double cfl = 0.5;
};

double pressure(const State& s, double gamma);

// Analytic flux component along the given axis (0 = x, 1 = y). Throws
// NonphysicalStateError on rho <= 0 or p <= 0.
std::array<double, 4> analytic_flux(const State& s, int axis, double gamma);

// Steger-Warming vector-splitting flux across the interface between `inner`
// and `outer` with unit normal sign*e_axis pointing from inner to outer.
// Consistent: splitting_flux(U, U, ...) equals the analytic flux along the
// normal. Negative normals use the mirror rule -H(outer, inner, +axis).
std::array<double, 4> splitting_flux(const State& inner, const State& outer, int axis,
                                     int sign, double gamma);

struct StepResult {
  Field field;
  double dt;
};

// One explicit first-order update with transmissive boundaries (the cell's
// own state serves as ghost). dt = cfl * min over cells of size / max wave
// speed, additionally capped by max_dt (ignored when max_dt <= 0).
StepResult step(const MeshMatrix& matrix, const Field& field, const SchemeConfig& scheme,
                double max_dt = 0.0);

// Normalized density gradient monitor.
MonitorResult density_monitor(const MeshMatrix& matrix, const Field& field);

// Explosion initial data: (1,0,0,2.5) inside the disc of radius 0.12 around
// (0.5,0.5), (1/8,0,0,0.25) outside; straddling cells take the 16x16
// subsampled volume-weighted mix.
Field explosion_initial(const MeshMatrix& matrix, const Grid& grid);

struct RunConfig {
  RefinementBounds bounds{2, 7, 9, 1};
  SchemeConfig scheme;
  Thresholds thresholds{0.4, 0.4};
  double t_end = 0.25;
  double snapshot_every = 0.05;  // 0 = final snapshot only
};

// Starts on uniform G_{level_min} and settles the initial data on the
// adapting mesh; per step: advance, adapt with the density monitor, transfer
// by the up/down projections. Snapshots (including t = 0 and t = t_end)
// arrive on the adapted grid.
void run_explosion(const MeshMatrix& matrix, const RunConfig& config,
                   const std::function<void(double, const Field&)>& on_snapshot);

// Copy of the field with pressure appended as a fifth component.
Field with_pressure(const Field& field, double gamma);

}  // namespace rsm::euler
