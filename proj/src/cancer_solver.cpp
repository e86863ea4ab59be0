#include "rsm/cancer_solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "rsm/errors.hpp"
#include "rsm/topology.hpp"

namespace rsm::cancer {

std::array<double, 3> source(const std::array<double, 3>& u, const Params& p) {
  const double c = u[0], v = u[1], m = u[2];
  return {p.mu * c * (1.0 - c), -p.delta * v * m, p.alpha * c - p.beta * m};
}

std::array<double, 3> interface_flux(const std::array<double, 3>& ui,
                                     const std::array<double, 3>& uj, double dist,
                                     int sign, const Params& p) {
  if (!(dist > 0.0))
    throw std::invalid_argument("interface_flux: coincident cell centers");
  if (sign < 0) {
    const std::array<double, 3> h = interface_flux(uj, ui, dist, +1, p);
    return {-h[0], -h[1], -h[2]};
  }
  const double inv = 1.0 / dist;
  const double c_x = (uj[0] - ui[0]) * inv;
  const double v_x = (uj[1] - ui[1]) * inv;
  const double m_x = (uj[2] - ui[2]) * inv;
  // haptotactic velocity chi * dv/dn, upwinded by its sign
  const double w = p.chi * v_x;
  const double w_plus = std::max(0.0, w);
  const double w_minus = -std::min(0.0, w);
  std::array<double, 3> h;
  h[0] = -p.d_c * c_x + (w_plus * ui[0] - w_minus * uj[0]);
  h[1] = 0.0;
  h[2] = -p.d_m * m_x;
  return h;
}

namespace {

std::array<double, 3> state_at(const Field& f, std::size_t i) {
  const double* r = f.row(i);
  return {r[0], r[1], r[2]};
}

}  // namespace

StepResult step(const MeshMatrix& matrix, const Field& field, const SchemeConfig& scheme,
                double max_dt) {
  if (matrix.bounds().dim != 2)
    throw std::invalid_argument("cancer::step: requires a 2D mesh");
  if (field.components != 3)
    throw std::invalid_argument("cancer::step: field must have 3 components");
  const Grid& grid = field.grid;
  const std::size_t n = grid.size();
  const Params& p = scheme.params;
  const double d_max = std::max(p.d_c, p.d_m);

  // stability bound: explicit diffusion h^2/(4 D) and haptotactic transport
  // h/(chi |grad v|), evaluated with each cell's own size
  double dt = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const cell_line c = grid.cells()[i];
    const CellGeometry gi = matrix.geometry(c);
    const double vi = field.at(i, 1);
    double grad_v = 0.0;
    visit_neighbors(matrix, grid, c, [&](cell_line nb, Direction) {
      const CellGeometry gn = matrix.geometry(nb);
      const double dx = gn.center[0] - gi.center[0];
      const double dy = gn.center[1] - gi.center[1];
      const double dist = std::sqrt(dx * dx + dy * dy);
      const double s = std::abs(field.at(grid.index_of(nb), 1) - vi) / dist;
      if (s > grad_v) grad_v = s;
    });
    double bound = gi.size * gi.size / (4.0 * d_max);
    if (grad_v > 0.0) bound = std::min(bound, gi.size / (p.chi * grad_v));
    dt = std::min(dt, bound);
  }
  dt *= scheme.cfl;
  if (max_dt > 0.0) dt = std::min(dt, max_dt);

  Field next = field;
  for (std::size_t i = 0; i < n; ++i) {
    const cell_line c = grid.cells()[i];
    const std::array<double, 3> ui = state_at(field, i);
    const CellGeometry gi = matrix.geometry(c);
    const int li = matrix.level_of(c);

    std::array<std::array<double, 3>, 4> face{};
    for (int d = 0; d < 4; ++d) {
      const Direction dir = static_cast<Direction>(d);
      if (same_level_neighbor(matrix, c, dir) == k_no_line) continue;  // Neumann wall
      const bool positive = dir == Direction::east || dir == Direction::north;
      visit_direction(matrix, grid, c, dir, [&](cell_line nb, Direction) {
        const std::array<double, 3> uj = state_at(field, grid.index_of(nb));
        const CellGeometry gn = matrix.geometry(nb);
        const double dx = gn.center[0] - gi.center[0];
        const double dy = gn.center[1] - gi.center[1];
        const double dist = std::sqrt(dx * dx + dy * dy);
        const double ratio = interface_ratio(li, matrix.level_of(nb));
        const std::array<double, 3> h = positive ? interface_flux(ui, uj, dist, +1, p)
                                                 : interface_flux(uj, ui, dist, +1, p);
        const double sgn = positive ? 1.0 : -1.0;
        for (int k = 0; k < 3; ++k) face[d][k] += sgn * ratio * h[k];
      });
    }

    const std::array<double, 3> s = source(ui, p);
    double* out = next.row(i);
    for (int k = 0; k < 3; ++k) {
      const double div = (face[0][k] + face[1][k]) + (face[2][k] + face[3][k]);
      out[k] = ui[static_cast<std::size_t>(k)] + dt * (s[static_cast<std::size_t>(k)] - div);
      if (!(std::abs(out[k]) < scheme.blowup_guard))
        throw InstabilityError("cancer: value passed the blow-up guard in cell line " +
                               std::to_string(c));
    }
  }
  return {std::move(next), dt};
}

MonitorResult cancer_monitor(const MeshMatrix& matrix, const Field& field) {
  return gradient_monitor(matrix, field, 0);
}

EcmField EcmField::uniform(double v0) {
  EcmField e;
  e.kind_ = Kind::uniform;
  e.constant_ = v0;
  return e;
}

EcmField EcmField::bumps() {
  EcmField e;
  e.kind_ = Kind::bumps;
  return e;
}

EcmField EcmField::from_pgm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("EcmField::from_pgm: cannot open " + path);
  std::string token;
  auto next_token = [&]() -> std::string {
    std::string t;
    while (in >> t) {
      if (t[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      return t;
    }
    throw std::runtime_error("EcmField::from_pgm: truncated file " + path);
  };
  if (next_token() != "P2")
    throw std::runtime_error("EcmField::from_pgm: expected ASCII PGM (P2): " + path);
  EcmField e;
  e.kind_ = Kind::raster;
  e.width_ = std::stoi(next_token());
  e.height_ = std::stoi(next_token());
  const double maxval = std::stod(next_token());
  if (e.width_ <= 0 || e.height_ <= 0 || maxval <= 0)
    throw std::runtime_error("EcmField::from_pgm: bad header in " + path);
  e.pixels_.reserve(static_cast<std::size_t>(e.width_) * e.height_);
  for (int i = 0; i < e.width_ * e.height_; ++i)
    e.pixels_.push_back(std::stod(next_token()) / maxval);
  return e;
}

double EcmField::operator()(double x, double y) const {
  switch (kind_) {
    case Kind::uniform:
      return constant_;
    case Kind::bumps: {
      // fixed smooth bump landscape clamped to [0.05, 1]
      static constexpr double kb[7][4] = {
          // cx, cy, width, amplitude
          {0.22, 0.30, 0.11, 0.55}, {0.58, 0.14, 0.09, 0.50}, {0.85, 0.42, 0.12, 0.45},
          {0.38, 0.55, 0.10, 0.50}, {0.10, 0.62, 0.08, 0.40}, {0.68, 0.66, 0.11, 0.48},
          {0.50, 0.34, 0.13, 0.35}};
      double v = 0.15;
      for (const auto& b : kb) {
        const double dx = x - b[0];
        const double dy = y - b[1];
        v += b[3] * std::exp(-(dx * dx + dy * dy) / (2.0 * b[2] * b[2]));
      }
      return std::clamp(v, 0.05, 1.0);
    }
    default: {
      int col = static_cast<int>(x * width_);
      int row = static_cast<int>((1.0 - y) * height_);
      col = std::clamp(col, 0, width_ - 1);
      row = std::clamp(row, 0, height_ - 1);
      return pixels_[static_cast<std::size_t>(row) * width_ + col];
    }
  }
}

namespace {

bool in_tumour_region(double x, double y) {
  return y >= std::sin(x * x * x / 125.0 + (2.0 * x + 26.0) / 25.0 + 0.05);
}

}  // namespace

Field initial_condition(const MeshMatrix& matrix, const Grid& grid, const EcmField& ecm) {
  constexpr int k_sub = 16;
  Field f(grid, 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const CellGeometry g = matrix.geometry(grid.cells()[i]);
    const double sub_h = g.size / k_sub;
    const double x0 = g.center[0] - 0.5 * g.size;
    const double y0 = g.center[1] - 0.5 * g.size;
    double c = 0.0, v = 0.0, m = 0.0;
    for (int sy = 0; sy < k_sub; ++sy) {
      const double y = y0 + (sy + 0.5) * sub_h;
      for (int sx = 0; sx < k_sub; ++sx) {
        const double x = x0 + (sx + 0.5) * sub_h;
        if (in_tumour_region(x, y)) {
          c += 1.0;
          m += 0.3;
        } else {
          v += ecm(x, y);
        }
      }
    }
    const double norm = 1.0 / (k_sub * k_sub);
    f.at(i, 0) = c * norm;
    f.at(i, 1) = v * norm;
    f.at(i, 2) = m * norm;
  }
  return f;
}

namespace {

// Re-evaluate the initial data on the adapting mesh until it settles. The ECM
// carries no flux, so whatever staircase the first mesh imprints on it would
// persist for the whole run; sampling the data on the refined cells instead
// keeps the interface sharp at the resolution the monitor asks for.
Field settled_initial(const MeshMatrix& matrix, const EcmField& ecm, Thresholds thresholds) {
  Grid grid = Grid::uniform(matrix, matrix.bounds().level_min);
  const int rounds = matrix.bounds().level_max - matrix.bounds().level_min + 1;
  for (int it = 0; it < rounds; ++it) {
    const Field f0 = initial_condition(matrix, grid, ecm);
    MeshUpdateResult upd =
        mesh_update(matrix, grid, cancer_monitor(matrix, f0), thresholds);
    if (upd.refined.empty() && upd.coarsened.empty()) break;
    grid = std::move(upd.grid);
  }
  return initial_condition(matrix, grid, ecm);
}

// advance to exactly t_target; adapt each step when thresholds are active
Field advance(const MeshMatrix& matrix, Field field, const RunConfig& config, double t_from,
              double t_target, bool adaptive) {
  double t = t_from;
  while (t < t_target - 1e-12) {
    StepResult s = step(matrix, field, config.scheme, t_target - t);
    field = std::move(s.field);
    t = (t_target - t - s.dt <= 1e-12) ? t_target : t + s.dt;
    if (adaptive) {
      MeshUpdateResult upd = mesh_update(matrix, field.grid,
                                         cancer_monitor(matrix, field), config.thresholds);
      field = transfer_after_update(field, upd);
    }
  }
  return field;
}

}  // namespace

void run_invasion(const MeshMatrix& matrix, const RunConfig& config,
                  const std::function<void(double, const Field&)>& on_snapshot) {
  config.thresholds.validate();
  Field field = settled_initial(matrix, config.ecm, config.thresholds);
  std::vector<double> stops = config.snapshot_times;
  std::sort(stops.begin(), stops.end());
  double t = 0.0;
  if (!stops.empty() && stops.front() <= 1e-12) {
    if (on_snapshot) on_snapshot(0.0, field);
    stops.erase(stops.begin());
  }
  for (double stop : stops) {
    if (stop > config.t_end + 1e-12) break;
    field = advance(matrix, std::move(field), config, t, stop, /*adaptive=*/true);
    t = stop;
    if (on_snapshot) on_snapshot(t, field);
  }
  if (t < config.t_end - 1e-12)
    field = advance(matrix, std::move(field), config, t, config.t_end, /*adaptive=*/true);
}

std::vector<ErrorRow> invasion_error_table(const MeshMatrix& matrix, const RunConfig& config,
                                           double t_compare) {
  const int lmin = matrix.bounds().level_min;
  const int lmax = matrix.bounds().level_max;

  auto uniform_run = [&](int level) {
    Field f = initial_condition(matrix, Grid::uniform(matrix, level), config.ecm);
    return advance(matrix, std::move(f), config, 0.0, t_compare, /*adaptive=*/false);
  };

  const Field reference = uniform_run(lmax);

  std::vector<ErrorRow> rows;
  for (int level = lmin; level < lmax; ++level) {
    Field f = uniform_run(level);
    rows.push_back({"uniform_l" + std::to_string(level), f.grid.size(),
                    l1_distance(matrix, f, reference)[0]});
  }

  Field adaptive = settled_initial(matrix, config.ecm, config.thresholds);
  adaptive = advance(matrix, std::move(adaptive), config, 0.0, t_compare, /*adaptive=*/true);
  rows.push_back({"adaptive_l" + std::to_string(lmin) + "_" + std::to_string(lmax),
                  adaptive.grid.size(), l1_distance(matrix, adaptive, reference)[0]});
  return rows;
}

}  // namespace rsm::cancer
