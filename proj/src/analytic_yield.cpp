#include "chemcompass/analytic_yield.hpp"

#include "chemcompass/dynamics.hpp"
#include "chemcompass/model.hpp"

#include <cmath>
#include <stdexcept>

namespace chemcompass {

double g_lorentz(double x, double k) {
  if (!(k > 0)) throw std::invalid_argument("g_lorentz: k must be > 0");
  return k * k / (k * k + x * x);
}

EffectiveField effective_field(double theta, double b, double b_bias, double eps) {
  if (!(b >= 0)) throw std::invalid_argument("effective_field: field magnitude must be >= 0");
  const double x = b * std::sin(theta);      // transverse component
  const double z = b * std::cos(theta) + b_bias;  // longitudinal plus bias
  const double b1 = std::hypot(x, z);
  if (b1 < eps) return EffectiveField{b1, 0.0, true};
  return EffectiveField{b1, std::atan2(x, z), false};
}

namespace {

// Degenerate branch: the nuclear bias exactly cancels the applied field. The
// closed form's theta' is undefined there, so evaluate the same branch
// numerically: a one-nucleus model with tensor diag{0,0,2 b_bias} started in
// the polarized nuclear state |up> reproduces a pure b_bias z-bias on the
// probe electron.
double delegated_branch(double theta, double b_bias, const AnalyticParams& params) {
  RadicalPairModel model;
  model.b_field_ut = params.b / kGammaE;
  model.k = params.k;
  model.nuclei = {NucleusSpec{0.5, HyperfineTensor::axial(2.0 * b_bias)}};

  Matrix h = build_hamiltonian(model, FieldDirection{theta, 0.0});
  Vector s_el = Vector::Zero(4);
  s_el(1) = 1.0 / std::sqrt(2.0);
  s_el(2) = -1.0 / std::sqrt(2.0);
  Vector nuc_up = Vector::Zero(2);
  nuc_up(0) = 1.0;
  Matrix ket = kron(s_el, nuc_up);  // |S> (x) |up>, 8x1
  Matrix rho0 = ket * ket.adjoint();
  return resolvent_yield(h, {}, rho0, singlet_projector(model), params.k);
}

}  // namespace

BranchResult yield_branch(double theta, double b_bias, const AnalyticParams& params) {
  if (!(params.k > 0)) throw std::invalid_argument("yield_branch: k must be > 0");
  EffectiveField eff = effective_field(theta, params.b, b_bias);
  if (eff.degenerate) return BranchResult{delegated_branch(theta, b_bias, params), true};

  const double k = params.k;
  const double b = params.b;
  const double c = std::cos(theta - eff.theta_p);
  const double c2 = c * c;
  double v = 0.25 * (1.0 + c2) +
             0.25 * (1.0 - c2) * (g_lorentz(eff.b1, k) + g_lorentz(b, k)) +
             0.125 * (1.0 - c) * (1.0 - c) * g_lorentz(eff.b1 + b, k) +
             0.125 * (1.0 + c) * (1.0 + c) * g_lorentz(eff.b1 - b, k);
  return BranchResult{v, false};
}

double yield_avg(double theta, const AnalyticParams& params) {
  const double half_a = 0.5 * params.a;
  return 0.5 * (yield_branch(theta, half_a, params).value +
                yield_branch(theta, -half_a, params).value);
}

double regime1_approx(double theta) {
  const double c = std::cos(theta);
  return 0.25 * (1.0 + c * c);
}

double weakfield_sensitivity(double b, double k) {
  if (!(k > 0)) throw std::invalid_argument("weakfield_sensitivity: k must be > 0");
  return b * b / (4.0 * (k * k + b * b));
}

}  // namespace chemcompass
