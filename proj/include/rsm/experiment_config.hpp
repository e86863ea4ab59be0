#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace rsm {

// Flat key=value experiment description shared by the CLI and config files.
// Unset fields fall back to the per-experiment defaults at run time.
struct ExperimentConfig {
  std::string experiment;  // generic-m1..generic-m4, euler, cancer
  std::optional<int> lmin;
  std::optional<int> lmax;
  std::optional<int> mr;
  std::optional<double> theta_refine;
  std::optional<double> theta_coarsen;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<double> snapshot_every;
  std::optional<double> cfl;
  std::optional<std::string> out_dir;
  std::optional<std::string> ecm_raster;
  std::optional<std::string> cancer_experiment;  // uniform | heterogeneous | error-table
  std::optional<unsigned long> seed;

  bool operator==(const ExperimentConfig&) const = default;
};

// "key = value" per line; '#' starts a comment; unknown keys are rejected.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

// Emits every set field; parse(serialize(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace rsm
