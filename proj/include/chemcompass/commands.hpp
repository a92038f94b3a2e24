#pragma once

// The experiment drivers behind the CLI subcommands. Each takes a resolved
// configuration and returns named tables; the CLI writes them to
// <out_dir>/<name>.csv. Every table header carries the resolved config, its
// hash, the tool version, and the wall time, so outputs are self-describing.
// For a fixed config the data section of every table is deterministic,
// independent of the worker count.

#include "chemcompass/config.hpp"
#include "chemcompass/result_table.hpp"

#include <string>
#include <utility>
#include <vector>

namespace chemcompass {

struct CommandOutput {
  std::vector<std::pair<std::string, ResultTable>> tables;
};

// Phi_S(theta) over the theta grid by the resolvent; for one spin-1/2 nucleus
// with an axial tensor and no dephasing, also the closed form and the
// difference column.
CommandOutput cmd_yield(const ExperimentConfig& cfg);

// Sensitivity vs coupling strength: D_S over log-spaced a/omega_B, the
// lifetime table (optionally optimizing a per lifetime), and an optional
// (a, B) grid.
CommandOutput cmd_fig1(const ExperimentConfig& cfg);

// Control-field optimization: optimized yield curves against the uncontrolled
// baseline, the winning control parameters, and f_S(t) traces at theta = 0
// and pi/2 with and without control.
CommandOutput cmd_fig2(const ExperimentConfig& cfg);

// Dephasing scan: D_S over gamma in [0, gamma_max] for each correlation d,
// plus Phi_S(theta) curves at selected gammas for d = 0.
CommandOutput cmd_fig3(const ExperimentConfig& cfg);

// Optimizer front end: hyperfine-tensor or control-field target per the
// config; emits the report, the best parameters, and a config snippet for
// reuse.
CommandOutput cmd_optimize(const ExperimentConfig& cfg);

// One-axis D_S scan (a, b, k, or gamma) over explicit or generated values.
CommandOutput cmd_sweep(const ExperimentConfig& cfg);

}  // namespace chemcompass
