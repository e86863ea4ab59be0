#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "rsm/experiment_config.hpp"
#include "rsm/generic_experiments.hpp"
#include "rsm/grid.hpp"
#include "rsm/mesh_matrix.hpp"
#include "rsm/monitors.hpp"
#include "rsm/snapshot.hpp"

using namespace rsm;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

cell_line cell_at(const MeshMatrix& m, const Grid& g, double x, double y) {
  for (int l = m.bounds().level_max; l >= m.bounds().level_min; --l) {
    const std::uint64_t width = std::uint64_t{1} << l;
    const auto clampi = [&](double q) {
      auto k = static_cast<std::uint64_t>(q * static_cast<double>(width)) + 1;
      return k > width ? width : k;
    };
    const cell_line c = m.line_of(l, m.join_index(l, clampi(x), clampi(y)));
    if (g.contains(c)) return c;
  }
  return k_no_line;
}

}  // namespace

TEST_CASE("monitor values") {
  // peak of the diagonal Gaussian
  CHECK(monitor_value(GenericMonitor::m1, 0.35, 0.35, 0.25) == 1.0);
  // inside the hole of the ring at t = 0
  CHECK(monitor_value(GenericMonitor::m4, 0.05, 0.0, 0.0) == 0.0);
  CHECK(monitor_value(GenericMonitor::m4, 0.085, 0.0, 0.0) == 1.0);
  // the two Gaussians of m3 coincide at (0, 0.9) when t = 1
  CHECK(monitor_value(GenericMonitor::m3, 0.0, 0.9, 1.0) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("m1 sweep leaves a trace, two coarsening passes clear it") {
  const GenericRunConfig cfg = generic_defaults(GenericMonitor::m1);
  const MeshMatrix m(cfg.bounds);

  std::vector<std::pair<int, Grid>> passes;
  Grid final_evolution;
  run_generic(m, cfg, [&](double t, int pass, const Grid& g) {
    if (pass == 0 && std::abs(t - cfg.t_end) < 1e-12) final_evolution = g;
    if (pass > 0) passes.emplace_back(pass, g);
  });
  REQUIRE(passes.size() == 2);

  // the swept diagonal is refined to the top level
  for (double s = 0.05; s <= 0.75; s += 0.1) {
    const cell_line c = cell_at(m, final_evolution, 0.1 + s, 0.1 + s);
    REQUIRE(c != k_no_line);
    CHECK(m.level_of(c) == cfg.bounds.level_max);
  }

  // after two weak coarsening passes only the final Gaussian keeps refinement
  const Grid& after = passes[1].second;
  CHECK_NOTHROW(validate_rsm(m, after));
  std::size_t coarse_cells = 0;
  for (cell_line c : after.cells()) {
    const CellGeometry g = m.geometry(c);
    const double dist = std::hypot(g.center[0] - 0.9, g.center[1] - 0.9);
    if (dist > 0.15)
      CHECK(m.level_of(c) == cfg.bounds.level_min);
    else if (m.level_of(c) > cfg.bounds.level_min)
      ++coarse_cells;
  }
  CHECK(coarse_cells > 0);

  // a third pass would be a no-op away from the Gaussian: everything outside
  // its support already sits at the minimum level (checked above)
}

TEST_CASE("m2 sweep does not accumulate refinement") {
  GenericRunConfig cfg = generic_defaults(GenericMonitor::m2);
  cfg.t_end = 0.6;
  cfg.snapshot_every = 0.05;
  const MeshMatrix m(cfg.bounds);

  std::vector<std::size_t> refined_counts;
  run_generic(m, cfg, [&](double t, int, const Grid& g) {
    if (t < 0.2) return;  // allow the initial build-up
    std::size_t refined = 0;
    for (cell_line c : g.cells())
      if (m.level_of(c) > cfg.bounds.level_min) ++refined;
    refined_counts.push_back(refined);
  });
  REQUIRE(refined_counts.size() >= 5);
  const auto [lo, hi] = std::minmax_element(refined_counts.begin(), refined_counts.end());
  CHECK(*hi < 2 * *lo);  // bounded band, no trace build-up
}

TEST_CASE("m2 levels step down symmetrically away from the Gaussian") {
  GenericRunConfig cfg = generic_defaults(GenericMonitor::m2);
  cfg.t_end = 0.5;
  cfg.snapshot_every = 0.0;
  const MeshMatrix m(cfg.bounds);
  Grid last;
  run_generic(m, cfg, [&](double, int, const Grid& g) { last = g; });
  REQUIRE(!last.empty());

  const double a = 0.25 * std::numbers::pi;
  const double cx = 0.9 * std::cos(a);
  const double cy = 0.9 * std::sin(a);
  const cell_line center = cell_at(m, last, cx, cy);
  REQUIRE(center != k_no_line);
  CHECK(m.level_of(center) == cfg.bounds.level_max);

  // along each axis ray leaving the center the level never climbs back up
  const double step = std::ldexp(1.0, -cfg.bounds.level_max);
  for (int dir = 0; dir < 4; ++dir) {
    const double dx = dir == 0 ? 1.0 : dir == 1 ? -1.0 : 0.0;
    const double dy = dir == 2 ? 1.0 : dir == 3 ? -1.0 : 0.0;
    int prev = cfg.bounds.level_max + 1;
    for (int k = 0; k < 40; ++k) {
      const double x = cx + dx * k * step;
      const double y = cy + dy * k * step;
      if (x <= 0.0 || x >= 1.0 || y <= 0.0 || y >= 1.0) break;
      const cell_line c = cell_at(m, last, x, y);
      REQUIRE(c != k_no_line);
      CHECK(m.level_of(c) <= prev);
      prev = m.level_of(c);
    }
  }
}

TEST_CASE("m3 keeps a tail behind the moving Gaussians") {
  GenericRunConfig cfg = generic_defaults(GenericMonitor::m3);
  cfg.t_end = 0.6;
  cfg.snapshot_every = 0.0;
  const MeshMatrix m(cfg.bounds);

  Grid last;
  run_generic(m, cfg, [&](double, int, const Grid& g) { last = g; });
  REQUIRE(!last.empty());

  // trail point passed 0.05 time units ago: monitor sits between the two
  // thresholds there, so the cells refined during the passage are retained
  const double a = std::numbers::pi * 0.5 * (cfg.t_end - 0.05);
  const double tx = 0.9 * std::cos(a);
  const double ty = 0.9 * std::sin(a);
  const cell_line trail = cell_at(m, last, tx, ty);
  REQUIRE(trail != k_no_line);
  CHECK(m.level_of(trail) >= cfg.bounds.level_min + 2);

  // the control run with equal thresholds lets the tail go
  GenericRunConfig control = cfg;
  control.thresholds = {0.8, 0.8};
  Grid control_last;
  run_generic(m, control, [&](double, int, const Grid& g) { control_last = g; });
  std::size_t tail_cells = 0, control_cells = 0;
  for (cell_line c : last.cells())
    if (m.level_of(c) > cfg.bounds.level_min) ++tail_cells;
  for (cell_line c : control_last.cells())
    if (m.level_of(c) > cfg.bounds.level_min) ++control_cells;
  CHECK(tail_cells > control_cells);
}

TEST_CASE("snapshots") {
  SUBCASE("uniform level-1 grid records the four cell centers") {
    const MeshMatrix m({2, 0, 1, 1});
    const Grid g = Grid::uniform(m, 1);
    const char* path = "snap_uniform.csv";
    write_snapshot(m, g, path);
    const std::string text = slurp(path);
    std::remove(path);
    CHECK(text ==
          "line,level,center_x,center_y,size\n"
          "2,1,0.25,0.25,0.5\n"
          "3,1,0.75,0.25,0.5\n"
          "4,1,0.25,0.75,0.5\n"
          "5,1,0.75,0.75,0.5\n");
  }

  SUBCASE("the 1D example grid lists the expected sizes") {
    const MeshMatrix m({1, 0, 3, 3});
    const Grid g = Grid::from_cells(m, {2, 12, 13, 7});
    const char* path = "snap_1d.csv";
    write_snapshot(m, g, path);
    const std::string text = slurp(path);
    std::remove(path);
    CHECK(text ==
          "line,level,center_x,size\n"
          "2,1,0.25,0.5\n"
          "7,2,0.875,0.25\n"
          "12,3,0.5625,0.125\n"
          "13,3,0.6875,0.125\n");
  }

  SUBCASE("identical runs write byte-identical files") {
    GenericRunConfig cfg = generic_defaults(GenericMonitor::m4);
    cfg.t_end = 0.2;
    cfg.snapshot_every = 0.1;
    const MeshMatrix m(cfg.bounds);
    std::string first, second;
    for (int round = 0; round < 2; ++round) {
      std::string all;
      run_generic(m, cfg, [&](double t, int pass, const Grid& g) {
        char name[64];
        std::snprintf(name, sizeof name, "det_%d_%d_%.3f.csv", round, pass, t);
        write_snapshot(m, g, name);
        all += slurp(name);
        std::remove(name);
      });
      (round == 0 ? first : second) = all;
    }
    CHECK(first == second);
    CHECK(!first.empty());
  }
}

TEST_CASE("experiment config round trip") {
  ExperimentConfig c;
  c.experiment = "generic-m3";
  c.lmin = 3;
  c.lmax = 7;
  c.mr = 1;
  c.theta_refine = 0.8;
  c.theta_coarsen = 0.3;
  c.dt = 0.005;
  c.t_end = 1.0;
  c.snapshot_every = 0.25;
  c.out_dir = "out/m3";
  c.seed = 42;

  std::istringstream in(serialize_config(c));
  CHECK(parse_config(in) == c);

  ExperimentConfig partial;
  partial.experiment = "cancer";
  partial.cancer_experiment = "error-table";
  partial.cfl = 0.5;
  std::istringstream in2(serialize_config(partial));
  CHECK(parse_config(in2) == partial);
}

TEST_CASE("config parser rejects garbage") {
  std::istringstream unknown("experiment = euler\nwhat = 3\n");
  CHECK_THROWS_AS(parse_config(unknown), std::invalid_argument);
  std::istringstream badval("lmin = banana\n");
  CHECK_THROWS_AS(parse_config(badval), std::invalid_argument);
  std::istringstream noeq("lmin 4\n");
  CHECK_THROWS_AS(parse_config(noeq), std::invalid_argument);
  std::istringstream comments("# just comments\n\n  # more\n");
  CHECK(parse_config(comments) == ExperimentConfig{});
}

TEST_CASE("every emitted grid satisfies the mesh contract") {
  for (GenericMonitor which :
       {GenericMonitor::m1, GenericMonitor::m2, GenericMonitor::m4}) {
    GenericRunConfig cfg = generic_defaults(which);
    cfg.t_end = 0.1;
    cfg.snapshot_every = 0.05;
    const MeshMatrix m(cfg.bounds);
    run_generic(m, cfg, [&](double, int, const Grid& g) {
      CHECK_NOTHROW(validate_rsm(m, g));
    });
  }
}
