#include "rsm/euler_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rsm/errors.hpp"
#include "rsm/topology.hpp"

namespace rsm::euler {

namespace {

State state_at(const Field& f, std::size_t i) {
  const double* r = f.row(i);
  return {r[0], r[1], r[2], r[3]};
}

void require_physical(const State& s, double gamma, cell_line line) {
  if (!(s.rho > 0.0) || !(pressure(s, gamma) > 0.0))
    throw NonphysicalStateError(
        "euler: nonphysical state (rho or p <= 0) in cell line " + std::to_string(line),
        line);
}

double split_eigen(double lambda, int sign) {
  return sign > 0 ? 0.5 * (lambda + std::abs(lambda)) : 0.5 * (lambda - std::abs(lambda));
}

// One half of the Steger-Warming splitting along +axis. Terms are grouped as
// (acoustic pair) + (entropy term) so that mirrored states produce bitwise
// mirrored fluxes; the discrete symmetry of the explosion runs relies on it.
std::array<double, 4> split_flux_part(const State& s, int axis, int sign, double gamma) {
  const double rho = s.rho;
  const double un = (axis == 0 ? s.mom_x : s.mom_y) / rho;
  const double ut = (axis == 0 ? s.mom_y : s.mom_x) / rho;
  const double p = pressure(s, gamma);
  const double c = std::sqrt(gamma * p / rho);
  const double enthalpy = (s.energy + p) / rho;
  const double gm1 = gamma - 1.0;

  const double l1 = split_eigen(un - c, sign);
  const double l2 = split_eigen(un, sign);
  const double l4 = split_eigen(un + c, sign);
  const double w = rho / (2.0 * gamma);

  const double f_mass = (l1 + l4) + 2.0 * gm1 * l2;
  const double f_norm = ((un - c) * l1 + (un + c) * l4) + 2.0 * gm1 * un * l2;
  const double f_tang = ut * f_mass;
  const double f_energy = ((enthalpy - un * c) * l1 + (enthalpy + un * c) * l4) +
                          gm1 * (un * un + ut * ut) * l2;

  std::array<double, 4> out;
  out[0] = w * f_mass;
  out[1 + axis] = w * f_norm;
  out[2 - axis] = w * f_tang;
  out[3] = w * f_energy;
  return out;
}

}  // namespace

double pressure(const State& s, double gamma) {
  return (gamma - 1.0) *
         (s.energy - 0.5 * (s.mom_x * s.mom_x + s.mom_y * s.mom_y) / s.rho);
}

std::array<double, 4> analytic_flux(const State& s, int axis, double gamma) {
  require_physical(s, gamma, k_no_line);
  const double p = pressure(s, gamma);
  const double un = (axis == 0 ? s.mom_x : s.mom_y) / s.rho;
  std::array<double, 4> out;
  out[0] = s.rho * un;
  out[1] = s.mom_x * un;
  out[2] = s.mom_y * un;
  out[1 + axis] += p;
  out[3] = (s.energy + p) * un;
  return out;
}

std::array<double, 4> splitting_flux(const State& inner, const State& outer, int axis,
                                     int sign, double gamma) {
  if (axis != 0 && axis != 1) throw std::invalid_argument("splitting_flux: bad axis");
  require_physical(inner, gamma, k_no_line);
  require_physical(outer, gamma, k_no_line);
  if (sign < 0) {
    const std::array<double, 4> h = splitting_flux(outer, inner, axis, +1, gamma);
    return {-h[0], -h[1], -h[2], -h[3]};
  }
  const std::array<double, 4> fp = split_flux_part(inner, axis, +1, gamma);
  const std::array<double, 4> fm = split_flux_part(outer, axis, -1, gamma);
  return {fp[0] + fm[0], fp[1] + fm[1], fp[2] + fm[2], fp[3] + fm[3]};
}

StepResult step(const MeshMatrix& matrix, const Field& field, const SchemeConfig& scheme,
                double max_dt) {
  if (matrix.bounds().dim != 2)
    throw std::invalid_argument("euler::step: requires a 2D mesh");
  if (field.components != 4)
    throw std::invalid_argument("euler::step: field must have 4 components");
  const Grid& grid = field.grid;
  const std::size_t n = grid.size();
  const double gamma = scheme.gamma;

  double dt = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const State s = state_at(field, i);
    require_physical(s, gamma, grid.cells()[i]);
    const double u = s.mom_x / s.rho;
    const double v = s.mom_y / s.rho;
    const double c = std::sqrt(gamma * pressure(s, gamma) / s.rho);
    const double speed = std::max(std::abs(u) + c, std::abs(v) + c);
    const double h = matrix.geometry(grid.cells()[i]).size;
    dt = std::min(dt, h / speed);
  }
  dt *= scheme.cfl;
  if (max_dt > 0.0) dt = std::min(dt, max_dt);

  Field next = field;
  for (std::size_t i = 0; i < n; ++i) {
    const cell_line c = grid.cells()[i];
    const State ui = state_at(field, i);
    const int li = matrix.level_of(c);

    // per-direction face sums; every interface flux is evaluated in the
    // canonical west->east / south->north orientation, so both sides of a
    // face see the same bits and interior contributions telescope exactly
    std::array<std::array<double, 4>, 4> face{};
    for (int d = 0; d < 4; ++d) {
      const Direction dir = static_cast<Direction>(d);
      const int axis = (dir == Direction::west || dir == Direction::east) ? 0 : 1;
      const bool positive = dir == Direction::east || dir == Direction::north;
      auto add = [&](const State& un_, const State& uo_, double ratio) {
        const std::array<double, 4> h =
            positive ? splitting_flux(un_, uo_, axis, +1, gamma)
                     : splitting_flux(uo_, un_, axis, +1, gamma);
        const double sgn = positive ? 1.0 : -1.0;
        for (int k = 0; k < 4; ++k) face[d][k] += sgn * ratio * h[k];
      };
      if (same_level_neighbor(matrix, c, dir) == k_no_line) {
        add(ui, ui, std::ldexp(1.0, li));  // transmissive ghost across the wall
        continue;
      }
      visit_direction(matrix, grid, c, dir, [&](cell_line nb, Direction) {
        const State uj = state_at(field, grid.index_of(nb));
        add(ui, uj, interface_ratio(li, matrix.level_of(nb)));
      });
    }

    double* out = next.row(i);
    for (int k = 0; k < 4; ++k) {
      const double div = (face[0][k] + face[1][k]) + (face[2][k] + face[3][k]);
      out[k] = field.at(i, k) - dt * div;
    }
  }
  return {std::move(next), dt};
}

MonitorResult density_monitor(const MeshMatrix& matrix, const Field& field) {
  return gradient_monitor(matrix, field, 0);
}

Field explosion_initial(const MeshMatrix& matrix, const Grid& grid) {
  constexpr int k_sub = 16;
  constexpr double k_radius2 = 0.12 * 0.12;
  const State inside{1.0, 0.0, 0.0, 2.5};
  const State outside{0.125, 0.0, 0.0, 0.25};

  Field f(grid, 4);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const CellGeometry g = matrix.geometry(grid.cells()[i]);
    const double sub_h = g.size / k_sub;
    const double x0 = g.center[0] - 0.5 * g.size;
    const double y0 = g.center[1] - 0.5 * g.size;
    int hits = 0;
    for (int sy = 0; sy < k_sub; ++sy) {
      const double y = y0 + (sy + 0.5) * sub_h;
      const double dy = y - 0.5;
      for (int sx = 0; sx < k_sub; ++sx) {
        const double x = x0 + (sx + 0.5) * sub_h;
        const double dx = x - 0.5;
        if (dx * dx + dy * dy < k_radius2) ++hits;
      }
    }
    const double frac = static_cast<double>(hits) / (k_sub * k_sub);
    f.at(i, 0) = frac * inside.rho + (1.0 - frac) * outside.rho;
    f.at(i, 1) = 0.0;
    f.at(i, 2) = 0.0;
    f.at(i, 3) = frac * inside.energy + (1.0 - frac) * outside.energy;
  }
  return f;
}

void run_explosion(const MeshMatrix& matrix, const RunConfig& config,
                   const std::function<void(double, const Field&)>& on_snapshot) {
  config.bounds.validate();
  config.thresholds.validate();
  // settle the initial data: re-evaluate it on the adapting mesh so the disc
  // edge starts resolved at the level the monitor requests
  Grid grid = Grid::uniform(matrix, matrix.bounds().level_min);
  Field field = explosion_initial(matrix, grid);
  const int rounds = matrix.bounds().level_max - matrix.bounds().level_min + 1;
  for (int it = 0; it < rounds; ++it) {
    MeshUpdateResult upd =
        mesh_update(matrix, grid, density_monitor(matrix, field), config.thresholds);
    if (upd.refined.empty() && upd.coarsened.empty()) break;
    grid = std::move(upd.grid);
    field = explosion_initial(matrix, grid);
  }
  if (on_snapshot) on_snapshot(0.0, field);

  const double t_end = config.t_end;
  double next_snap =
      config.snapshot_every > 0.0 ? config.snapshot_every : t_end;
  double t = 0.0;
  while (t < t_end - 1e-12) {
    const double stop = std::min(t_end, next_snap);
    StepResult s = step(matrix, field, config.scheme, stop - t);
    field = std::move(s.field);
    t = (stop - t - s.dt <= 1e-12) ? stop : t + s.dt;

    MeshUpdateResult upd =
        mesh_update(matrix, field.grid, density_monitor(matrix, field), config.thresholds);
    field = transfer_after_update(field, upd);

    if (t >= next_snap - 1e-12 || t >= t_end - 1e-12) {
      if (on_snapshot) on_snapshot(t, field);
      while (next_snap <= t + 1e-12) next_snap += config.snapshot_every > 0.0
                                                      ? config.snapshot_every
                                                      : t_end;
    }
  }
}

Field with_pressure(const Field& field, double gamma) {
  Field out(field.grid, 5);
  for (std::size_t i = 0; i < field.grid.size(); ++i) {
    const State s = state_at(field, i);
    out.at(i, 0) = s.rho;
    out.at(i, 1) = s.mom_x;
    out.at(i, 2) = s.mom_y;
    out.at(i, 3) = s.energy;
    out.at(i, 4) = pressure(s, gamma);
  }
  return out;
}

}  // namespace rsm::euler
