#pragma once

// Line-oriented experiment configuration: [model], [run], [output] sections of
// `key = value` pairs, '#' comments, repeated `nucleus` keys for the spin
// system. Everything is validated up front (unknown keys and malformed values
// are reported with their line number) and the fully resolved configuration is
// echoed into every output header, so a run can be reproduced from its output.

#include "chemcompass/model.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace chemcompass {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ExperimentConfig {
  RadicalPairModel model;  // defaults: B = 46 uT, k = 0.5/us, one axial nucleus at omega_B/3

  // run
  int grid = 91;            // theta grid for sensitivity evaluations
  bool full_theta = false;  // scan theta over [0, pi] instead of [0, pi/2]
  std::uint64_t seed = 1;
  int jobs = 0;  // parallel sweep workers; 0 = hardware concurrency
  int theta_points = 33;  // curve tables (yield, fig2)
  int scan_points = 60;
  double scan_min = 0.02;
  double scan_max = 50.0;
  bool scan_log = true;
  std::string axis = "a";  // sweep subcommand: a | b | k | gamma
  std::vector<double> values;  // explicit scan values; overrides scan_* when set
  std::vector<double> d_values{0.0, 0.8, 1.0, -1.0};
  double gamma_max = 4.0;
  int gamma_points = 17;
  std::vector<double> curve_gammas{0.0, 0.5, 2.0};
  bool contour = false;  // fig1: also emit the (a, B) grid
  int budget = 5000;
  int restarts = 3;
  std::string control = "harmonic";  // harmonic | piecewise
  int terms = 2;
  int segments = 3;
  double c_max_ut = 1000.0;
  double omega_max = 50.0;
  double duration_us = 0.0;  // 0 = 14/k
  std::string optimize_target = "hyperfine";  // hyperfine | control
  int n_nuclei = 1;
  std::string tensor_form = "axial";  // axial | diagonal
  std::vector<double> lifetimes_us{0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
  bool optimize_a = true;

  // output
  std::string out_dir = ".";
  int precision = 17;

  void validate() const;  // cross-field checks, throws ConfigError
};

// Built-in defaults: the 46 uT, k = 0.5/us model with one spin-1/2 nucleus at
// a = omega_B/3 (the optimal working point).
ExperimentConfig default_config();

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Canonical serialization of every resolved value, suitable for re-parsing;
// echoed into output headers and hashed so runs can be traced to a config.
std::string resolved_config(const ExperimentConfig& cfg);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace chemcompass
