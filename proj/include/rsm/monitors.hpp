#pragma once

#include "rsm/adaptation.hpp"
#include "rsm/field.hpp"
#include "rsm/grid.hpp"
#include "rsm/mesh_matrix.hpp"

namespace rsm {

// Analytic monitor functions driving the generic experiments:
//   m1: Gaussian travelling along the diagonal, center (0.1+t, 0.1+t)
//   m2: Gaussian sweeping the circle of radius 0.9, angle pi*t/2
//   m3: m2 plus a second Gaussian at angle pi*(1 - t/2)
//   m4: indicator of the annulus 0.07 + t/2 < |x| < 0.1 + t/2
enum class GenericMonitor { m1, m2, m3, m4 };

// m1/m2/m4 stay in [0,1]; m3 peaks at 2 where the Gaussians coincide.
double monitor_value(GenericMonitor which, double x, double y, double t);

// Cell-center sampling over the grid.
MonitorResult sample_monitor(const MeshMatrix& matrix, const Grid& grid,
                             GenericMonitor which, double t);

// Normalized gradient monitor on one field component:
//   g_i = max over neighbors |q_j - q_i| / |M(C_i) - M(C_j)|,  M_i = g_i / max g
// An all-zero gradient yields an all-zero monitor.
MonitorResult gradient_monitor(const MeshMatrix& matrix, const Field& field, int component);

}  // namespace rsm
