#pragma once

// Time-dependent control field C(t) applied along a fixed direction to both
// electron spins: H_c(t) = gamma_e C(t) n_c . (S1 + S2). Two shapes: a sum of
// harmonics and a piecewise-constant step sequence that is zero after its
// last breakpoint.

#include "chemcompass/model.hpp"

#include <variant>
#include <vector>

namespace chemcompass {

struct HarmonicTerm {
  double a_sin = 0.0;  // uT
  double b_cos = 0.0;  // uT
  double omega = 0.0;  // rad/us
};

struct StepSequence {
  std::vector<double> breakpoints;  // us, strictly ascending
  std::vector<double> amplitudes;   // uT, amplitudes[i] holds on [breaks[i-1], breaks[i])
};

struct ControlField {
  std::variant<std::vector<HarmonicTerm>, StepSequence> shape;
  Eigen::Vector3d direction{1.0, 0.0, 0.0};  // unit vector, x by default
  double c_max = 1000.0;                     // uT amplitude bound
  double duration = 28.0;                    // us; C(t) = 0 beyond this

  static ControlField harmonics(std::vector<HarmonicTerm> terms, double duration,
                                double c_max = 1000.0);
  static ControlField steps(std::vector<double> breakpoints, std::vector<double> amplitudes,
                            double duration, double c_max = 1000.0);
};

// C(t) in uT; zero for t beyond the duration (and, for steps, beyond the last
// breakpoint). Throws std::invalid_argument for malformed step sequences.
double control_value(const ControlField& c, double t);

// gamma_e C(t) n_c . (S1 + S2) embedded in the product space given by dims.
Matrix control_hamiltonian(const ControlField& c, double t, const std::vector<int>& dims);

// Cheap upper bound on sup_t |C(t)| used for integrator step control:
// sum of |A_k| + |B_k| for harmonics, max |amplitude| for steps.
double amplitude_bound(const ControlField& c);

// max(0, max_t |C(t)| - c_max) sampled on a uniform grid; the measurable
// quantity behind the amplitude constraint.
double amplitude_violation(const ControlField& c, int samples = 512);

// Largest angular frequency present (0 for steps); enters step control.
double max_frequency(const ControlField& c);

}  // namespace chemcompass
