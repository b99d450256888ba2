#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "bergman/profile.hpp"

namespace bergman {

struct ProfileSpecConfig {
  std::string family;  // exp_inverse | double_exp | monomial
  double p = 1.0;
  int M = 1;
  double cutoff = 0.5;
  double kappa = 1.0;
  bool pure = false;
};

struct DoublingConfig {
  bool enabled = false;
  double R = 0.4;
  double sigma_max = 1e6;
};

struct SweepConfig {
  std::string name;
  std::string kind;  // kernel_band | sandwich | metric_band
  double alpha = 1.0;
  int N = 2;
  double t_min = 1e-6;
  double t_max = 1e-2;
  int points = 30;
  std::string path = "origin";  // origin | edge
  double theta = 0.5;
  double band_limit = 1e3;
  double slope_tol = 0.1;
  int k_max = 64;
  std::vector<std::array<double, 4>> directions;  // metric: re/im xi1, re/im xi2
};

struct RunConfig {
  int version = 1;
  ProfileSpecConfig profile;
  bool validate = true;
  DoublingConfig doubling;
  std::vector<SweepConfig> sweeps;
  std::string output_dir = "out";
  std::vector<std::string> formats{"csv", "json"};
  int parallelism = 0;  // 0 = auto
  std::uint64_t seed = 0;
};

/// Parses and validates a run configuration. Throws domain_error with
/// field-level diagnostics.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);

RadialProfile make_profile(const ProfileSpecConfig& spec);

/// Validation -> doubling search -> sweeps; writes the requested artifacts
/// plus summary.json (always). Returns 0 when every verdict passed, 2 when
/// any failed. Execution errors propagate as exceptions (callers map to 1).
/// only_sweep restricts execution to the named sweep.
int run(const RunConfig& cfg, std::ostream& log, const std::string& only_sweep = "");

}  // namespace bergman
