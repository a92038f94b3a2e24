#pragma once

// Angular response curves and the compass figure of merit
// D_S = Phi_max - Phi_min over field directions, found on a uniform theta
// grid and polished by golden-section refinement.

#include "chemcompass/model.hpp"

#include <functional>
#include <string>
#include <vector>

namespace chemcompass {

using YieldFn = std::function<double(double)>;  // theta -> Phi_S

struct AngularResponse {
  std::vector<double> theta;  // ascending samples
  std::vector<double> phi_s;
  double theta_max = 0, phi_max = 0;
  double theta_min = 0, phi_min = 0;
  double d_s = 0;  // phi_max - phi_min
};

// Samples the evaluator on a uniform grid over [0, pi/2] (the yield is
// symmetric under theta -> pi - theta for static axial models; full_range
// switches to [0, pi] for dephasing and control runs where we prefer not to
// rely on that), then refines both extrema by golden-section search to 1e-6
// in theta. grid_size >= 9.
AngularResponse angular_response(const YieldFn& evaluator, int grid_size = 91,
                                 bool full_range = false);

enum class ScanAxis { HyperfineA, FieldB, RateK, DephasingGamma };

// The axis value a scan point writes into the model template:
//   HyperfineA: axial coupling (rad/us) of the first nucleus, tensor diag{0,0,v}
//   FieldB:     field magnitude (uT)
//   RateK:      recombination rate (1/us)
//   DephasingGamma: dephasing rate (1/us)
RadicalPairModel with_axis_value(const RadicalPairModel& tmpl, ScanAxis axis, double value);

struct ScanPoint {
  double value = 0;
  AngularResponse response;
  bool ok = false;
  std::string error;  // set when the point failed; the scan continues
};

// One angular response per value, resolvent evaluator, deterministic order.
std::vector<ScanPoint> sensitivity_scan(const RadicalPairModel& tmpl, ScanAxis axis,
                                        const std::vector<double>& values,
                                        int grid_size = 91, bool full_range = false);

struct LifetimeRow {
  double tau = 0;     // us
  double best_a = 0;  // rad/us; the template's coupling when not optimized
  double d_s = 0;
  bool ok = false;
  std::string error;
};

// D_S as a function of radical-pair lifetime tau = 1/k, optionally optimizing
// the axial coupling a for each lifetime (one-nucleus models).
std::vector<LifetimeRow> lifetime_sensitivity(const RadicalPairModel& tmpl,
                                              const std::vector<double>& lifetimes,
                                              bool optimize_a);

}  // namespace chemcompass
