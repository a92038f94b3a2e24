#pragma once

// Closed-form singlet yield for one spin-1/2 nucleus with an axial hyperfine
// tensor diag{0,0,a} and no dephasing. The nucleus acts as a static +-a/2 bias
// along z, turning each branch into a two-field problem (applied field B at
// angle theta, effective field B1 at angle theta'); the yield is a rational
// function of the two fields through g(x) = k^2/(k^2+x^2). Used both as the
// fast evaluation path and as the cross-check oracle for the dynamics module.
//
// Unit convention: the field B is an angular frequency (rad/us) and k a rate
// (1/us); the closed form treats both as plain inverse time.

#include <optional>

namespace chemcompass {

// k^2 / (k^2 + x^2), the exponential-lifetime line-shape factor.
double g_lorentz(double x, double k);

struct EffectiveField {
  double b1;       // magnitude, rad/us, >= 0
  double theta_p;  // angle from z, via atan2(B sin t, B cos t + b)
  bool degenerate;  // b1 below epsilon: theta' undefined
};

// Vector sum of the applied field (magnitude b, angle theta) and the nuclear
// bias b_bias along z.
EffectiveField effective_field(double theta, double b, double b_bias, double eps = 1e-9);

struct AnalyticParams {
  double b;  // applied field, rad/us
  double a;  // axial hyperfine coupling, rad/us
  double k;  // recombination rate, 1/us
};

struct BranchResult {
  double value;
  bool delegated;  // degenerate branch evaluated by the numeric resolvent instead
};

// Yield of a single nuclear branch with bias b_bias (normally +-a/2):
//   Phi = 1/4 (1+c^2) + 1/4 (1-c^2)[g(B1)+g(B)] + 1/8 (1-c)^2 g(B1+B)
//       + 1/8 (1+c)^2 g(B1-B),   c = cos(theta - theta').
// When B1 is degenerate (b_bias cancels the field at theta in {0, pi}) the
// closed form has no defined theta' and the branch is delegated to the
// resolvent on the equivalent polarized-nucleus model.
BranchResult yield_branch(double theta, double b_bias, const AnalyticParams& params);

// Thermal-nucleus average over the two branches: (Phi(+a/2) + Phi(-a/2))/2.
double yield_avg(double theta, const AnalyticParams& params);

// Large-coupling limit (a >> B): Phi_S(theta) ~= (1 + cos^2 theta)/4.
double regime1_approx(double theta);

// Weak-field sensitivity limit: D_S(B) = B^2 / (4 (k^2 + B^2)).
double weakfield_sensitivity(double b, double k);

}  // namespace chemcompass
