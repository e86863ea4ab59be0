#include "rsm/monitors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rsm/topology.hpp"

namespace rsm {

namespace {

double gaussian_at(double x, double y, double cx, double cy) {
  const double dx = x - cx;
  const double dy = y - cy;
  return std::exp(-100.0 * (dx * dx + dy * dy));
}

}  // namespace

double monitor_value(GenericMonitor which, double x, double y, double t) {
  constexpr double pi = std::numbers::pi;
  switch (which) {
    case GenericMonitor::m1: {
      const double p = 0.1 + t;
      return gaussian_at(x, y, p, p);
    }
    case GenericMonitor::m2: {
      const double a = 0.5 * pi * t;
      return gaussian_at(x, y, 0.9 * std::cos(a), 0.9 * std::sin(a));
    }
    case GenericMonitor::m3: {
      const double a = pi * (1.0 - 0.5 * t);
      return gaussian_at(x, y, 0.9 * std::cos(a), 0.9 * std::sin(a)) +
             monitor_value(GenericMonitor::m2, x, y, t);
    }
    default: {
      const double r = std::sqrt(x * x + y * y);
      const double lo = 0.07 + 0.5 * t;
      const double hi = 0.1 + 0.5 * t;
      return (lo < r && r < hi) ? 1.0 : 0.0;
    }
  }
}

MonitorResult sample_monitor(const MeshMatrix& matrix, const Grid& grid,
                             GenericMonitor which, double t) {
  MonitorResult out;
  out.values.reserve(grid.size());
  for (cell_line c : grid.cells()) {
    const CellGeometry g = matrix.geometry(c);
    out.values.push_back(monitor_value(which, g.center[0], g.center[1], t));
  }
  return out;
}

MonitorResult gradient_monitor(const MeshMatrix& matrix, const Field& field, int component) {
  if (component < 0 || component >= field.components)
    throw std::invalid_argument("gradient_monitor: component out of range");
  const Grid& grid = field.grid;
  MonitorResult out;
  out.values.assign(grid.size(), 0.0);

  double gmax = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cell_line c = grid.cells()[i];
    const CellGeometry gi = matrix.geometry(c);
    const double qi = field.at(i, component);
    double g = 0.0;
    visit_neighbors(matrix, grid, c, [&](cell_line n, Direction) {
      const CellGeometry gn = matrix.geometry(n);
      const double dx = gn.center[0] - gi.center[0];
      const double dy = gn.center[1] - gi.center[1];
      const double dist = std::sqrt(dx * dx + dy * dy);
      const double slope =
          std::abs(field.at(grid.index_of(n), component) - qi) / dist;
      if (slope > g) g = slope;
    });
    out.values[i] = g;
    if (g > gmax) gmax = g;
  }
  if (gmax > 0.0)
    for (double& v : out.values) v /= gmax;
  return out;
}

}  // namespace rsm
