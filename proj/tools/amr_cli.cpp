// Command line front end: generic monitor experiments, the Euler explosion,
// the cancer invasion runs, and matrix storage accounting.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rsm/cancer_solver.hpp"
#include "rsm/errors.hpp"
#include "rsm/euler_solver.hpp"
#include "rsm/experiment_config.hpp"
#include "rsm/generic_experiments.hpp"
#include "rsm/snapshot.hpp"

namespace {

struct CliOptions {
  rsm::ExperimentConfig cfg;
  std::string config_path;
};

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", t);
  return buf;
}

std::filesystem::path ensure_out_dir(const rsm::ExperimentConfig& cfg) {
  const std::filesystem::path dir = cfg.out_dir.value_or("out");
  std::filesystem::create_directories(dir);
  return dir;
}

// CLI flags win over config-file values; both win over built-in defaults.
void merge_file_config(rsm::ExperimentConfig& cfg, const std::string& path) {
  if (path.empty()) return;
  const rsm::ExperimentConfig file = rsm::parse_config_file(path);
  auto pick = [](auto& target, const auto& fallback) {
    if (!target && fallback) target = fallback;
  };
  pick(cfg.lmin, file.lmin);
  pick(cfg.lmax, file.lmax);
  pick(cfg.mr, file.mr);
  pick(cfg.theta_refine, file.theta_refine);
  pick(cfg.theta_coarsen, file.theta_coarsen);
  pick(cfg.dt, file.dt);
  pick(cfg.t_end, file.t_end);
  pick(cfg.snapshot_every, file.snapshot_every);
  pick(cfg.cfl, file.cfl);
  pick(cfg.out_dir, file.out_dir);
  pick(cfg.ecm_raster, file.ecm_raster);
  pick(cfg.cancer_experiment, file.cancer_experiment);
  pick(cfg.seed, file.seed);
  if (cfg.experiment.empty()) cfg.experiment = file.experiment;
}

void add_common_flags(CLI::App* app, CliOptions& opt) {
  app->add_option("--config", opt.config_path, "key = value config file");
  app->add_option("--lmin", opt.cfg.lmin, "minimum refinement level");
  app->add_option("--lmax", opt.cfg.lmax, "maximum refinement level");
  app->add_option("--mr", opt.cfg.mr, "mesh regularity (max level jump)");
  app->add_option("--theta-refine", opt.cfg.theta_refine, "refinement threshold");
  app->add_option("--theta-coarsen", opt.cfg.theta_coarsen, "coarsening threshold");
  app->add_option("--t-end", opt.cfg.t_end, "end time");
  app->add_option("--snapshot-every", opt.cfg.snapshot_every, "snapshot interval");
  app->add_option("--out-dir", opt.cfg.out_dir, "output directory");
  app->add_option("--seed", opt.cfg.seed, "seed for randomized fixtures");
}

int run_generic_cmd(CliOptions& opt, const std::string& monitor_name) {
  rsm::GenericMonitor which;
  if (monitor_name == "m1") which = rsm::GenericMonitor::m1;
  else if (monitor_name == "m2") which = rsm::GenericMonitor::m2;
  else if (monitor_name == "m3") which = rsm::GenericMonitor::m3;
  else if (monitor_name == "m4") which = rsm::GenericMonitor::m4;
  else throw std::invalid_argument("generic: unknown monitor '" + monitor_name + "'");

  rsm::GenericRunConfig run = rsm::generic_defaults(which);
  const auto& c = opt.cfg;
  if (c.lmin) run.bounds.level_min = *c.lmin;
  if (c.lmax) run.bounds.level_max = *c.lmax;
  if (c.mr) run.bounds.regularity = *c.mr;
  if (c.theta_refine) run.thresholds.refine = *c.theta_refine;
  if (c.theta_coarsen) run.thresholds.coarsen = *c.theta_coarsen;
  if (c.dt) run.dt = *c.dt;
  if (c.t_end) run.t_end = *c.t_end;
  if (c.snapshot_every) run.snapshot_every = *c.snapshot_every;
  if (run.dt <= 0.0 || run.t_end < 0.0)
    throw std::invalid_argument("generic: need dt > 0 and t_end >= 0");
  run.bounds.validate();

  const auto dir = ensure_out_dir(opt.cfg);
  const rsm::MeshMatrix matrix(run.bounds);
  int count = 0;
  rsm::run_generic(matrix, run, [&](double t, int pass, const rsm::Grid& grid) {
    std::string name = monitor_name + "_t" + time_tag(t);
    if (pass > 0) name += "_coarsen" + std::to_string(pass);
    const auto path = (dir / (name + ".csv")).string();
    rsm::write_snapshot(matrix, grid, path);
    std::cout << "wrote " << path << " (" << grid.size() << " cells)\n";
    ++count;
  });
  std::cout << "generic " << monitor_name << ": " << count << " snapshots\n";
  return 0;
}

int run_euler_cmd(CliOptions& opt, std::optional<double> cfl) {
  rsm::euler::RunConfig run;
  const auto& c = opt.cfg;
  if (c.lmin) run.bounds.level_min = *c.lmin;
  if (c.lmax) run.bounds.level_max = *c.lmax;
  if (c.mr) run.bounds.regularity = *c.mr;
  if (c.theta_refine) run.thresholds.refine = *c.theta_refine;
  if (c.theta_coarsen) run.thresholds.coarsen = *c.theta_coarsen;
  if (c.t_end) run.t_end = *c.t_end;
  if (c.snapshot_every) run.snapshot_every = *c.snapshot_every;
  if (cfl) run.scheme.cfl = *cfl;
  else if (c.cfl) run.scheme.cfl = *c.cfl;
  if (run.t_end < 0.0 || run.scheme.cfl <= 0.0 || run.scheme.cfl > 1.0)
    throw std::invalid_argument("euler: need t_end >= 0 and 0 < cfl <= 1");
  run.bounds.validate();

  const auto dir = ensure_out_dir(opt.cfg);
  const rsm::MeshMatrix matrix(run.bounds);
  const std::vector<std::string> names{"rho", "mom_x", "mom_y", "E", "p"};
  rsm::euler::run_explosion(matrix, run, [&](double t, const rsm::Field& f) {
    const auto path = (dir / ("euler_t" + time_tag(t) + ".csv")).string();
    rsm::write_snapshot(matrix, rsm::euler::with_pressure(f, run.scheme.gamma),
                        names, path);
    std::cout << "wrote " << path << " (" << f.grid.size() << " cells)\n";
  });
  return 0;
}

int run_cancer_cmd(CliOptions& opt, const std::string& experiment) {
  rsm::cancer::RunConfig run;
  const auto& c = opt.cfg;
  if (c.lmin) run.bounds.level_min = *c.lmin;
  if (c.lmax) run.bounds.level_max = *c.lmax;
  if (c.mr) run.bounds.regularity = *c.mr;
  if (c.theta_refine) run.thresholds.refine = *c.theta_refine;
  if (c.theta_coarsen) run.thresholds.coarsen = *c.theta_coarsen;
  if (c.cfl) run.scheme.cfl = *c.cfl;
  if ((c.t_end && *c.t_end < 0.0) || run.scheme.cfl <= 0.0 || run.scheme.cfl > 1.0)
    throw std::invalid_argument("cancer: need t_end >= 0 and 0 < cfl <= 1");
  run.bounds.validate();

  if (experiment == "heterogeneous") {
    run.ecm = c.ecm_raster ? rsm::cancer::EcmField::from_pgm(*c.ecm_raster)
                           : rsm::cancer::EcmField::bumps();
    run.t_end = 4.0;
    run.snapshot_times = {0.0, 1.0, 4.0};
  } else {
    if (c.ecm_raster) run.ecm = rsm::cancer::EcmField::from_pgm(*c.ecm_raster);
  }
  if (c.t_end) run.t_end = *c.t_end;
  if (c.snapshot_every && *c.snapshot_every > 0.0) {
    run.snapshot_times.clear();
    for (double t = 0.0; t <= run.t_end + 1e-12; t += *c.snapshot_every)
      run.snapshot_times.push_back(t);
  } else if (c.t_end) {
    run.snapshot_times = {0.0, run.t_end / 2.0, run.t_end};
  }

  const auto dir = ensure_out_dir(opt.cfg);
  const rsm::MeshMatrix matrix(run.bounds);
  const std::vector<std::string> names{"c", "v", "m"};

  if (experiment == "error-table") {
    const double t_compare = c.t_end ? *c.t_end : 2.5;
    const auto rows = rsm::cancer::invasion_error_table(matrix, run, t_compare);
    const auto path = (dir / "cancer_error_table.csv").string();
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fprintf(f, "setting,cells,l1_error\n");
    for (const auto& row : rows)
      std::fprintf(f, "%s,%zu,%.17g\n", row.setting.c_str(), row.cells, row.l1_error);
    std::fclose(f);
    std::cout << "setting,cells,l1_error\n";
    for (const auto& row : rows)
      std::printf("%s,%zu,%.6e\n", row.setting.c_str(), row.cells, row.l1_error);
    std::cout << "wrote " << path << " (cell counts taken at t = " << t_compare << ")\n";
    return 0;
  }

  rsm::cancer::run_invasion(matrix, run, [&](double t, const rsm::Field& f) {
    const auto path = (dir / ("cancer_t" + time_tag(t) + ".csv")).string();
    rsm::write_snapshot(matrix, f, names, path);
    std::cout << "wrote " << path << " (" << f.grid.size() << " cells)\n";
  });
  return 0;
}

int run_inspect_cmd(int dim, int lmin, int lmax) {
  rsm::RefinementBounds b{dim, lmin, lmax, 1};
  b.validate();
  const auto full = rsm::entry_count_and_memory(b, rsm::MatrixLayout::full);
  const auto edge = rsm::entry_count_and_memory(b, rsm::MatrixLayout::no_edge_columns);
  const auto kl = rsm::entry_count_and_memory(b, rsm::MatrixLayout::no_kl_columns);
  std::printf("dimension %d, levels %d..%d\n", dim, lmin, lmax);
  std::printf("lines: %llu\n", static_cast<unsigned long long>(full.lines));
  std::printf("%-18s %12s %14s %10s\n", "layout", "entries", "bytes", "approx");
  auto row = [](const char* name, const rsm::MatrixFootprint& fp) {
    std::printf("%-18s %12llu %14llu %10s\n", name,
                static_cast<unsigned long long>(fp.entries),
                static_cast<unsigned long long>(fp.bytes),
                rsm::format_bytes(fp.bytes).c_str());
  };
  row("full", full);
  row("no-edge-columns", edge);
  row("no-kl-columns", kl);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dyadic adaptive-mesh bookkeeping and finite-volume experiment runner"};
  app.require_subcommand(1);

  CliOptions opt;

  auto* generic = app.add_subcommand("generic", "run a synthetic monitor experiment");
  std::string monitor_name = "m1";
  generic->add_option("--monitor", monitor_name, "m1 | m2 | m3 | m4");
  generic->add_option("--dt", opt.cfg.dt, "marking time step");
  add_common_flags(generic, opt);

  auto* eulercmd = app.add_subcommand("euler", "run the 2D explosion experiment");
  std::optional<double> euler_cfl;
  eulercmd->add_option("--cfl", euler_cfl, "CFL factor");
  add_common_flags(eulercmd, opt);

  auto* cancercmd = app.add_subcommand("cancer", "run a cancer invasion experiment");
  std::string cancer_experiment;
  cancercmd->add_option("--experiment", cancer_experiment,
                        "uniform | heterogeneous | error-table");
  cancercmd->add_option("--cfl", opt.cfg.cfl, "CFL factor");
  cancercmd->add_option("--ecm-raster", opt.cfg.ecm_raster, "PGM raster for v0");
  add_common_flags(cancercmd, opt);

  auto* inspect = app.add_subcommand("inspect", "matrix size and memory accounting");
  int ins_d = 2, ins_lmin = 4, ins_lmax = 10;
  inspect->add_option("--d", ins_d, "spatial dimension");
  inspect->add_option("--lmin", ins_lmin, "minimum refinement level");
  inspect->add_option("--lmax", ins_lmax, "maximum refinement level");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    merge_file_config(opt.cfg, opt.config_path);
    if (generic->parsed()) return run_generic_cmd(opt, monitor_name);
    if (eulercmd->parsed()) return run_euler_cmd(opt, euler_cfl);
    if (cancercmd->parsed()) {
      std::string exp = cancer_experiment;
      if (exp.empty()) exp = opt.cfg.cancer_experiment.value_or("uniform");
      if (exp != "uniform" && exp != "heterogeneous" && exp != "error-table")
        throw std::invalid_argument("cancer: unknown experiment '" + exp + "'");
      return run_cancer_cmd(opt, exp);
    }
    if (inspect->parsed()) return run_inspect_cmd(ins_d, ins_lmin, ins_lmax);
  } catch (const rsm::NonphysicalStateError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const rsm::InstabilityError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const rsm::InconsistentGridError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
