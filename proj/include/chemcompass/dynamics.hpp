#pragma once

// Open-system propagation and exact singlet-yield evaluation. Because the
// singlet and triplet recombination rates are equal, recombination factors
// out of the generator as the exponential weight r(t) = k exp(-kt), leaving a
// trace-preserving Liouvillian; the yield is then either one linear solve
// (resolvent, time-independent generators) or a weighted quadrature over a
// propagated f_S(t) (time-dependent control).

#include "chemcompass/control_field.hpp"
#include "chemcompass/model.hpp"

#include <optional>
#include <vector>

namespace chemcompass {

struct Liouvillian {
  Matrix m;  // N^2 x N^2, column-major vectorization vec(ρ)
  bool includes_dephasing = false;
};

// Matrix form of rho -> -i[H, rho] + (1/4) sum_k (2 L_k rho L_k^+ - {L_k^+ L_k, rho})
// under column-major vectorization, via vec(A X B) = (B^T (x) A) vec(X).
Liouvillian build_liouvillian(const Matrix& h, const std::vector<Matrix>& lindblads);

// Exponential-lifetime-weighted singlet yield by one linear solve,
//   Phi_S = k <vec(P_S), (k Id - L)^{-1} vec(rho_0)>,
// for an arbitrary initial state and projector. The generic work-horse.
double resolvent_yield(const Matrix& h, const std::vector<Matrix>& lindblads,
                       const Matrix& rho0, const Matrix& ps, double k);

// Same quantity for closed dynamics (no Lindblad terms), evaluated in the
// Hamiltonian eigenbasis: Phi_S = sum_mn k/(k + i(l_m - l_n)) P_nm rho_mn.
// Exact, and two orders of magnitude faster than the Liouville-space solve;
// used in optimizer inner loops and cross-checked against resolvent_yield.
double eigenbasis_yield(const Matrix& h, const Matrix& rho0, const Matrix& ps, double k);

// Singlet yield of the model at a field direction, in [0, 1]. Values outside
// [-1e-9, 1+1e-9] indicate a solver failure and throw; anything else is
// clamped to [0, 1].
double singlet_yield_resolvent(const RadicalPairModel& model, const FieldDirection& dir);

struct PropagationResult {
  std::vector<double> t;    // uniform grid, us, t[0] = 0
  std::vector<double> f_s;  // Tr(P_S rho(t)), in [0, 1]
  Matrix final_state;
};

struct PropagateOptions {
  double abs_tol = 1e-9;    // per-component absolute tolerance
  bool fixed_step = false;  // classic RK4 at the sample spacing, for exact reproducibility
};

// Integrates d rho/dt = -i[H0 + H_c(t), rho] + dissipator with an adaptive
// Dormand-Prince 5(4) pair. The sample spacing (and the step-size ceiling) is
// min(dt_max, 1/(50 max(omega_B, a, gamma_e max|C|, gamma, omega_control)))
// so that every frequency in the problem is well resolved. Trace drift beyond
// 1e-6 aborts with a diagnostic.
PropagationResult propagate(const RadicalPairModel& model, const FieldDirection& dir,
                            const ControlField* control, double t_end, double dt_max,
                            const PropagateOptions& opts = {});

struct QuadratureResult {
  double value;       // composite Simpson of k exp(-kt) f_S(t) over [0, t_end]
  double tail_bound;  // k int_{t_end}^inf exp(-kt) dt = exp(-k t_end), since f_S <= 1
};

// Requires t_end >= 14/k so the neglected tail is < 1e-6.
QuadratureResult singlet_yield_quadrature(const PropagationResult& result, double k);

}  // namespace chemcompass
