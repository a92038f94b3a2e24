#pragma once

// Derivative-free optimization of hyperfine couplings and control fields.
// The single engine is Nelder-Mead with standard coefficients (1, 2, 0.5, 0.5)
// and seeded restarts; maximization runs as minimization of the negated
// objective, and constraints enter as quadratic penalties (lambda = 1e3) so
// the simplex mechanics stay untouched.

#include "chemcompass/control_field.hpp"
#include "chemcompass/model.hpp"
#include "chemcompass/sensitivity.hpp"

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace chemcompass {

inline constexpr double kPenaltyLambda = 1e3;

struct OptimizerOptions {
  int max_evaluations = 5000;   // total across restarts
  double initial_scale = 0.25;  // simplex edge relative to max(|x0_i|, 1)
  double f_tol = 1e-10;         // termination: spread of simplex values
  double x_tol = 1e-8;          // termination: spread of simplex vertices
  int restarts = 3;             // re-seeds around the incumbent with jitter
  std::uint64_t seed = 1;

  void validate() const;
};

struct RestartRecord {
  double best = 0;      // best objective seen by the end of this restart
  int evaluations = 0;  // objective calls spent in it
};

struct OptimizationReport {
  std::vector<double> best_parameters;
  double best_objective = 0;  // for the maximizing wrappers this is the maximized value
  int evaluations = 0;
  bool converged = false;  // a tolerance (not the budget) ended the final restart
  std::vector<RestartRecord> restart_history;
};

using Objective = std::function<double(const std::vector<double>&)>;

// Minimizes f. Non-finite objective values are treated as +infinity. Never
// reports a best objective worse than f(x0).
OptimizationReport nelder_mead(const Objective& f, std::vector<double> x0,
                               const OptimizerOptions& opts);

enum class TensorForm { Axial, Diagonal };

// The model a hyperfine parameter vector describes: n spin-1/2 nuclei on the
// template's probe electron, tensors decoded per the form (one coupling a for
// Axial, (tx, ty, tz) triples for Diagonal). This is the exact mapping the
// optimizer searches over, exposed so reports can be rehydrated.
RadicalPairModel hyperfine_model(const RadicalPairModel& tmpl, int n_nuclei, TensorForm form,
                                 const std::vector<double>& params);

// Maximizes D_S over hyperfine tensor parameters of n spin-1/2 nuclei placed
// on the probe electron: one scalar a >= 0 per nucleus (Axial, tensor
// diag{0,0,a}) or (tx, ty, tz) per nucleus (Diagonal). `bounds` gives one
// (lo, hi) pair per parameter, enforced by penalty; pass an empty vector for
// the defaults (Axial: [0, 20 omega_B], Diagonal: [-20 omega_B, 20 omega_B]).
// best_objective is the maximized D_S.
OptimizationReport optimize_hyperfine(const RadicalPairModel& tmpl, int n_nuclei,
                                      TensorForm form,
                                      std::vector<std::pair<double, double>> bounds,
                                      const OptimizerOptions& opts);

struct ControlTemplate {
  enum class Kind { Harmonic, Piecewise } kind = Kind::Harmonic;
  int count = 2;  // harmonic terms or constant segments
};

struct ControlConstraints {
  double c_max = 1000.0;    // uT
  double omega_max = 50.0;  // rad/us
  double duration = 0.0;    // us; <= 0 means the default 14/k
};

struct ControlOptimizationReport : OptimizationReport {
  ControlField best_control;
  // Phi_S(theta) at the optimum over the full [0, pi] range, evaluated with
  // the time-stepping propagator + quadrature (the pinned slow path), next to
  // the uncontrolled resolvent curve.
  std::vector<double> theta_grid;
  std::vector<double> phi_controlled;
  std::vector<double> phi_uncontrolled;
  double d_s_controlled = 0;    // from the verified curve, extrema refined
  double d_s_uncontrolled = 0;
  ControlConstraints constraints;  // echoed into every report
};

// Maximizes the controlled sensitivity over the control parameters
// ({A_k, B_k, omega_k} for harmonics; segment lengths and amplitudes for
// steps). The search objective is the yield contrast between the uncontrolled
// extremal directions, Phi(pi/2) - Phi(0) (a lower bound on D_S); the
// reported d_s_controlled comes from re-evaluating the winner over the full
// angular grid with propagate + quadrature. c_max = 0 short-circuits to the
// uncontrolled baseline.
ControlOptimizationReport optimize_control(const RadicalPairModel& model,
                                           const ControlTemplate& tmpl,
                                           const ControlConstraints& constraints,
                                           const OptimizerOptions& opts);

// Exponential-weight singlet yield under a control field for gamma = 0
// models, the optimizer's inner-loop evaluator. Harmonic fields use
// second-order split-operator stepping of the pure-state decomposition of
// rho_0 with an exact post-duration tail; step fields are evaluated exactly,
// segment by segment, in the eigenbasis of each constant Hamiltonian. Agrees
// with propagate + quadrature to integrator tolerance (tested).
double controlled_yield_fast(const RadicalPairModel& model, const FieldDirection& dir,
                             const ControlField& control);

// The pinned slow path: propagate + quadrature with the step-size ceiling
// from dynamics. Works for any gamma.
double controlled_yield_propagated(const RadicalPairModel& model, const FieldDirection& dir,
                                   const ControlField& control);

}  // namespace chemcompass
