#include "rsm/experiment_config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rsm {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    bool known = true;
    try {
      if (key == "experiment") c.experiment = value;
      else if (key == "lmin") c.lmin = std::stoi(value);
      else if (key == "lmax") c.lmax = std::stoi(value);
      else if (key == "mr") c.mr = std::stoi(value);
      else if (key == "theta_refine") c.theta_refine = std::stod(value);
      else if (key == "theta_coarsen") c.theta_coarsen = std::stod(value);
      else if (key == "dt") c.dt = std::stod(value);
      else if (key == "t_end") c.t_end = std::stod(value);
      else if (key == "snapshot_every") c.snapshot_every = std::stod(value);
      else if (key == "cfl") c.cfl = std::stod(value);
      else if (key == "out_dir") c.out_dir = value;
      else if (key == "ecm_raster") c.ecm_raster = value;
      else if (key == "cancer_experiment") c.cancer_experiment = value;
      else if (key == "seed") c.seed = std::stoul(value);
      else known = false;
    } catch (const std::exception&) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": bad value for '" + key + "'");
    }
    if (!known)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
  }
  return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  return parse_config(in);
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  if (!c.experiment.empty()) out << "experiment = " << c.experiment << '\n';
  if (c.lmin) out << "lmin = " << *c.lmin << '\n';
  if (c.lmax) out << "lmax = " << *c.lmax << '\n';
  if (c.mr) out << "mr = " << *c.mr << '\n';
  if (c.theta_refine) out << "theta_refine = " << format_double(*c.theta_refine) << '\n';
  if (c.theta_coarsen) out << "theta_coarsen = " << format_double(*c.theta_coarsen) << '\n';
  if (c.dt) out << "dt = " << format_double(*c.dt) << '\n';
  if (c.t_end) out << "t_end = " << format_double(*c.t_end) << '\n';
  if (c.snapshot_every)
    out << "snapshot_every = " << format_double(*c.snapshot_every) << '\n';
  if (c.cfl) out << "cfl = " << format_double(*c.cfl) << '\n';
  if (c.out_dir) out << "out_dir = " << *c.out_dir << '\n';
  if (c.ecm_raster) out << "ecm_raster = " << *c.ecm_raster << '\n';
  if (c.cancer_experiment) out << "cancer_experiment = " << *c.cancer_experiment << '\n';
  if (c.seed) out << "seed = " << *c.seed << '\n';
  return out.str();
}

}  // namespace rsm
