#include "chemcompass/optimize.hpp"

#include "chemcompass/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chemcompass {

namespace {

constexpr double kPi = std::numbers::pi;

double bound_penalty(double v, double lo, double hi) {
  if (v < lo) return kPenaltyLambda * (lo - v) * (lo - v);
  if (v > hi) return kPenaltyLambda * (v - hi) * (v - hi);
  return 0.0;
}

}  // namespace

RadicalPairModel hyperfine_model(const RadicalPairModel& tmpl, int n_nuclei, TensorForm form,
                                 const std::vector<double>& params) {
  if (n_nuclei < 1) throw std::invalid_argument("hyperfine_model: n_nuclei must be >= 1");
  const std::size_t per = (form == TensorForm::Axial) ? 1 : 3;
  if (params.size() != per * std::size_t(n_nuclei))
    throw std::invalid_argument("hyperfine_model: parameter count mismatch");

  RadicalPairModel m = tmpl;
  int electron = tmpl.nuclei.empty() ? 2 : tmpl.nuclei[0].hyperfine.electron;
  m.nuclei.assign(n_nuclei, NucleusSpec{0.5, HyperfineTensor::axial(0.0, electron)});
  for (int j = 0; j < n_nuclei; ++j) {
    m.nuclei[j].hyperfine =
        (form == TensorForm::Axial)
            ? HyperfineTensor::axial(params[j], electron)
            : HyperfineTensor::diagonal(params[3 * j], params[3 * j + 1], params[3 * j + 2],
                                        electron);
  }
  return m;
}

OptimizationReport optimize_hyperfine(const RadicalPairModel& tmpl, int n_nuclei,
                                      TensorForm form,
                                      std::vector<std::pair<double, double>> bounds,
                                      const OptimizerOptions& opts) {
  if (n_nuclei < 1) throw std::invalid_argument("optimize_hyperfine: n_nuclei must be >= 1");
  const int per = (form == TensorForm::Axial) ? 1 : 3;
  const std::size_t n_params = std::size_t(per) * n_nuclei;

  RadicalPairModel base = hyperfine_model(tmpl, n_nuclei, form,
                                          std::vector<double>(n_params, 0.0));
  base.validate();

  const double wb = base.omega_b();
  if (bounds.empty()) {
    bounds.assign(n_params, form == TensorForm::Axial
                                ? std::make_pair(0.0, 20.0 * wb)
                                : std::make_pair(-20.0 * wb, 20.0 * wb));
  }
  if (bounds.size() != n_params)
    throw std::invalid_argument("optimize_hyperfine: need one bounds pair per parameter");

  const bool dephased = base.dephasing.gamma > 0;
  auto apply = [&](const std::vector<double>& x) { return hyperfine_model(tmpl, n_nuclei, form, x); };

  Objective objective = [&](const std::vector<double>& x) {
    double pen = 0.0;
    for (std::size_t j = 0; j < n_params; ++j)
      pen += bound_penalty(x[j], bounds[j].first, bounds[j].second);
    RadicalPairModel m = apply(x);
    YieldFn f;
    if (dephased) {
      f = [&m](double th) { return singlet_yield_resolvent(m, FieldDirection{th, 0.0}); };
    } else {
      // closed dynamics: the resolvent collapses to a Hamiltonian-eigenbasis
      // sum, exact and far cheaper (tested against the Liouville solve)
      Matrix rho0 = initial_state(m);
      Matrix ps = singlet_projector(m);
      f = [&m, rho0, ps](double th) {
        Matrix h = build_hamiltonian(m, FieldDirection{th, 0.0});
        return eigenbasis_yield(h, rho0, ps, m.k);
      };
    }
    return -angular_response(f, 91, dephased).d_s + pen;
  };

  std::vector<double> x0(n_params, 0.0);
  for (int j = 0; j < n_nuclei; ++j) {
    // start from the template's own tensor where it has one, so callers can
    // steer the search; otherwise fall back to the omega_B / 3 sweet spot
    Eigen::Vector3d seed(0.0, 0.0, wb / 3.0);
    if (j < int(tmpl.nuclei.size()) &&
        tmpl.nuclei[j].hyperfine.t.diagonal().cwiseAbs().maxCoeff() > 0)
      seed = tmpl.nuclei[j].hyperfine.t.diagonal();
    if (form == TensorForm::Axial) {
      x0[j] = std::min(std::max(seed.z(), bounds[j].first), bounds[j].second);
    } else {
      // zero transverse entries start the search axial and let the optimizer
      // break symmetry on its own
      for (int c = 0; c < 3; ++c)
        x0[3 * j + c] = std::min(std::max(seed[c], bounds[3 * j + c].first),
                                 bounds[3 * j + c].second);
    }
  }

  OptimizationReport report = nelder_mead(objective, x0, opts);
  report.best_objective = -report.best_objective;
  for (auto& r : report.restart_history) r.best = -r.best;
  return report;
}

// ---------------------------------------------------------------------------
// Fast gamma = 0 control evaluators
// ---------------------------------------------------------------------------

namespace {

struct PureStateBasis {
  Matrix h0;          // static Hamiltonian at this direction
  Matrix ps;          // singlet projector
  Matrix psi;         // columns: |S> (x) |nuclear basis state z>, weight 1/Z
  int z = 1;          // nuclear dimension
  Matrix control_op;  // n_c . (S1 + S2)
};

PureStateBasis pure_state_basis(const RadicalPairModel& model, const FieldDirection& dir,
                                const ControlField& control) {
  if (model.dephasing.gamma > 0)
    throw std::invalid_argument("controlled_yield_fast: requires gamma = 0");
  PureStateBasis b;
  b.h0 = build_hamiltonian(model, dir);
  b.ps = singlet_projector(model);
  const int n = model.hilbert_dim();
  b.z = n / 4;

  b.psi = Matrix::Zero(n, b.z);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int z = 0; z < b.z; ++z) {
    b.psi(1 * b.z + z, z) = inv_sqrt2;   // |ud> block
    b.psi(2 * b.z + z, z) = -inv_sqrt2;  // |du> block
  }

  const auto dims = model.dims();
  SpinOperators half = spin_operators(0.5);
  b.control_op = Matrix::Zero(n, n);
  for (int al = 0; al < 3; ++al) {
    if (control.direction[al] == 0.0) continue;
    Matrix s_al = (al == 0 ? half.sx : al == 1 ? half.sy : half.sz);
    b.control_op += control.direction[al] * (embed(s_al, 0, dims) + embed(s_al, 1, dims));
  }
  return b;
}

double f_singlet(const PureStateBasis& b, const Matrix& psi) {
  double f = 0.0;
  for (int col = 0; col < psi.cols(); ++col)
    for (int z = 0; z < b.z; ++z) {
      Complex amp = (psi(1 * b.z + z, col) - psi(2 * b.z + z, col)) / std::sqrt(2.0);
      f += std::norm(amp);
    }
  return f / double(b.z);
}

// k e^{-k t0} sum over eigen-pairs of the remaining free-evolution integral.
double exact_tail(const PureStateBasis& b, const HermitianEig& eig, const Matrix& psi,
                  double k, double t0) {
  Matrix p_eig = eig.vectors.adjoint() * b.ps * eig.vectors;
  Matrix c = eig.vectors.adjoint() * psi;  // coefficients per column
  double total = 0.0;
  const Eigen::Index n = eig.values.size();
  for (int col = 0; col < c.cols(); ++col) {
    Complex acc = 0.0;
    for (Eigen::Index m = 0; m < n; ++m)
      for (Eigen::Index nn = 0; nn < n; ++nn)
        acc += std::conj(c(m, col)) * p_eig(m, nn) * c(nn, col) /
               Complex(k, -(eig.values(m) - eig.values(nn)));
    total += acc.real();
  }
  return k * std::exp(-k * t0) * total / double(b.z);
}

double harmonic_yield_fast(const RadicalPairModel& model, const FieldDirection& dir,
                           const ControlField& control) {
  PureStateBasis b = pure_state_basis(model, dir, control);
  const double k = model.k;
  const double t_ctl = control.duration;

  double a_max = 0.0;
  for (const auto& nuc : model.nuclei)
    a_max = std::max(a_max, nuc.hyperfine.t.cwiseAbs().maxCoeff());
  const double scale = std::max({model.omega_b(), a_max, k,
                                 kGammaE * amplitude_bound(control), max_frequency(control)});
  std::size_t n_steps = static_cast<std::size_t>(std::ceil(t_ctl * 50.0 * std::max(scale, 1e-12)));
  n_steps += n_steps % 2;
  n_steps = std::max<std::size_t>(n_steps, 2);
  const double h = t_ctl / double(n_steps);

  HermitianEig eig = hermitian_eig(b.h0);
  // half-step free propagator, exact in the eigenbasis
  Matrix eh = eig.vectors *
              (eig.values.cast<Complex>().array() * Complex(0, -0.5 * h)).exp().matrix().asDiagonal() *
              eig.vectors.adjoint();
  // split the control rotation into the two single-electron halves:
  // exp(-i alpha n.(S1+S2)) = [cos(a/2) - 2i sin(a/2) n.S1][same for S2]
  const auto dims = model.dims();
  SpinOperators half = spin_operators(0.5);
  Matrix a1 = Matrix::Zero(b.h0.rows(), b.h0.cols());
  Matrix a2 = a1;
  for (int al = 0; al < 3; ++al) {
    if (control.direction[al] == 0.0) continue;
    Matrix s_al = (al == 0 ? half.sx : al == 1 ? half.sy : half.sz);
    a1 += control.direction[al] * embed(s_al, 0, dims);
    a2 += control.direction[al] * embed(s_al, 1, dims);
  }

  Matrix psi = b.psi;
  double simpson = k * std::exp(0.0) * f_singlet(b, psi);  // t = 0 endpoint
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double tm = (i + 0.5) * h;
    const double alpha = kGammaE * control_value(control, tm) * h;
    psi = eh * psi;
    const Complex c = std::cos(alpha / 2), s = Complex(0, -2.0) * std::sin(alpha / 2);
    psi = c * psi + s * (a2 * psi);
    psi = c * psi + s * (a1 * psi);
    psi = eh * psi;
    const double t = (i + 1) * h;
    const double w = k * std::exp(-k * t) * f_singlet(b, psi);
    if (i + 1 == n_steps)
      simpson += w;
    else
      simpson += (i % 2 == 0 ? 4.0 : 2.0) * w;
  }
  simpson *= h / 3.0;
  return simpson + exact_tail(b, eig, psi, k, t_ctl);
}

double steps_yield_exact(const RadicalPairModel& model, const FieldDirection& dir,
                         const ControlField& control) {
  PureStateBasis b = pure_state_basis(model, dir, control);
  const double k = model.k;
  const auto& seq = std::get<StepSequence>(control.shape);

  Matrix psi = b.psi;
  double total = 0.0;
  double t0 = 0.0;
  for (std::size_t i = 0; i < seq.breakpoints.size(); ++i) {
    const double t1 = std::min(seq.breakpoints[i], control.duration);
    if (t1 <= t0) continue;
    const double len = t1 - t0;
    Matrix h = b.h0 + (kGammaE * seq.amplitudes[i]) * b.control_op;
    HermitianEig eig = hermitian_eig(h);
    Matrix p_eig = eig.vectors.adjoint() * b.ps * eig.vectors;
    Matrix c = eig.vectors.adjoint() * psi;
    const Eigen::Index n = eig.values.size();
    // integral of k e^{-kt} f_S over the segment, in this eigenbasis:
    // f_S(t0+s) = sum_mn conj(c_m) P_mn c_n e^{i(l_m - l_n) s}
    Complex acc = 0.0;
    for (int col = 0; col < c.cols(); ++col)
      for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index nn = 0; nn < n; ++nn) {
          Complex zk(k, -(eig.values(m) - eig.values(nn)));
          acc += std::conj(c(m, col)) * p_eig(m, nn) * c(nn, col) *
                 (1.0 - std::exp(-zk * len)) / zk;
        }
    total += k * std::exp(-k * t0) * acc.real() / double(b.z);
    // advance the states to the segment end
    for (int col = 0; col < c.cols(); ++col)
      for (Eigen::Index m = 0; m < n; ++m)
        c(m, col) *= std::exp(Complex(0, -eig.values(m) * len));
    psi = eig.vectors * c;
    t0 = t1;
  }
  HermitianEig eig0 = hermitian_eig(b.h0);
  return total + exact_tail(b, eig0, psi, k, t0);
}

}  // namespace

double controlled_yield_fast(const RadicalPairModel& model, const FieldDirection& dir,
                             const ControlField& control) {
  model.validate();
  if (std::holds_alternative<StepSequence>(control.shape))
    return steps_yield_exact(model, dir, control);
  return harmonic_yield_fast(model, dir, control);
}

double controlled_yield_propagated(const RadicalPairModel& model, const FieldDirection& dir,
                                   const ControlField& control) {
  const double t_end = std::max(14.0 / model.k, control.duration + 2.0 / model.k);
  PropagationResult prop = propagate(model, dir, &control, t_end, t_end);
  return singlet_yield_quadrature(prop, model.k).value;
}

// ---------------------------------------------------------------------------
// Control optimization
// ---------------------------------------------------------------------------

namespace {

ControlField decode_harmonics(const std::vector<double>& x, int count,
                              const ControlConstraints& cns, double duration) {
  std::vector<HarmonicTerm> terms(count);
  for (int j = 0; j < count; ++j)
    terms[j] = HarmonicTerm{x[3 * j], x[3 * j + 1], x[3 * j + 2]};
  return ControlField::harmonics(std::move(terms), duration, cns.c_max);
}

ControlField decode_steps(const std::vector<double>& x, int count,
                          const ControlConstraints& cns, double duration) {
  std::vector<double> breaks(count), amps(count);
  double t = 0.0;
  for (int j = 0; j < count; ++j) {
    t += std::max(x[j], 1e-3);  // increments clamped positive; penalty handles the rest
    breaks[j] = t;
    amps[j] = x[count + j];
  }
  return ControlField::steps(std::move(breaks), std::move(amps), duration, cns.c_max);
}

}  // namespace

ControlOptimizationReport optimize_control(const RadicalPairModel& model,
                                           const ControlTemplate& tmpl,
                                           const ControlConstraints& constraints,
                                           const OptimizerOptions& opts) {
  model.validate();
  if (tmpl.count < 1) throw std::invalid_argument("optimize_control: count must be >= 1");
  ControlConstraints cns = constraints;
  if (cns.duration <= 0) cns.duration = 14.0 / model.k;

  ControlOptimizationReport report;
  report.constraints = cns;

  // uncontrolled reference curve over the full range
  YieldFn uncontrolled = [&model](double th) {
    return singlet_yield_resolvent(model, FieldDirection{th, 0.0});
  };
  const int verify_grid = 33;
  AngularResponse base = angular_response(uncontrolled, verify_grid, true);
  report.d_s_uncontrolled = base.d_s;

  if (cns.c_max == 0.0) {  // nothing to optimize: identically zero control
    report.best_control =
        ControlField::harmonics(std::vector<HarmonicTerm>(std::max(tmpl.count, 1)),
                                cns.duration, 0.0);
    report.theta_grid = base.theta;
    report.phi_controlled = base.phi_s;
    report.phi_uncontrolled = base.phi_s;
    report.d_s_controlled = base.d_s;
    report.best_objective = base.d_s;
    report.converged = true;
    return report;
  }

  const bool harmonic = tmpl.kind == ControlTemplate::Kind::Harmonic;
  const int count = tmpl.count;

  double a_ref = 0.0;
  for (const auto& nuc : model.nuclei)
    a_ref = std::max(a_ref, nuc.hyperfine.t.cwiseAbs().maxCoeff());
  if (a_ref == 0.0) a_ref = model.omega_b() / 3.0;

  auto decode = [&](const std::vector<double>& x) {
    return harmonic ? decode_harmonics(x, count, cns, cns.duration)
                    : decode_steps(x, count, cns, cns.duration);
  };

  Objective objective = [&](const std::vector<double>& x) {
    double pen = 0.0;
    if (harmonic) {
      for (int j = 0; j < count; ++j) {
        double w = std::abs(x[3 * j + 2]);
        if (w > cns.omega_max)
          pen += kPenaltyLambda * (w - cns.omega_max) * (w - cns.omega_max);
      }
    } else {
      double t_last = 0.0;
      for (int j = 0; j < count; ++j) {
        if (x[j] < 1e-3) pen += kPenaltyLambda * (1e-3 - x[j]) * (1e-3 - x[j]);
        t_last += std::max(x[j], 1e-3);
        double c = std::abs(x[count + j]);
        if (c > cns.c_max) pen += kPenaltyLambda * (c - cns.c_max) * (c - cns.c_max);
      }
      if (t_last > cns.duration)
        pen += kPenaltyLambda * (t_last - cns.duration) * (t_last - cns.duration);
    }
    ControlField field = decode(x);
    if (harmonic) {
      double viol = amplitude_violation(field, 400);
      pen += kPenaltyLambda * viol * viol;
    }
    double y0 = controlled_yield_fast(model, FieldDirection{0.0, 0.0}, field);
    double y1 = controlled_yield_fast(model, FieldDirection{kPi / 2, 0.0}, field);
    return -(y1 - y0) + pen;
  };

  std::vector<double> x0;
  if (harmonic) {
    // modest tones bracketing the Zeeman frequency, half a hyperfine apart
    for (int j = 0; j < count; ++j) {
      double w = model.omega_b() + (j - 0.5 * (count - 1)) * 0.5 * a_ref;
      x0.insert(x0.end(), {5.0, 1.0, w});
    }
  } else {
    x0.assign(2 * std::size_t(count), 0.0);
    x0[0] = 2.0;
    for (int j = 1; j < count; ++j) x0[j] = 0.8;
    for (int j = 0; j < count; ++j) {
      double sgn = (j % 2 == 0) ? 1.0 : -1.0;
      x0[count + j] = (j == 0) ? 0.05 * cns.c_max : sgn * 0.65 * cns.c_max;
    }
  }

  OptimizationReport nm = nelder_mead(objective, x0, opts);
  static_cast<OptimizationReport&>(report) = nm;
  report.best_objective = -nm.best_objective;
  for (auto& r : report.restart_history) r.best = -r.best;
  report.best_control = decode(nm.best_parameters);

  // verification pass with the pinned propagate + quadrature evaluator
  const ControlField& field = report.best_control;
  YieldFn controlled = [&](double th) {
    return controlled_yield_propagated(model, FieldDirection{th, 0.0}, field);
  };
  AngularResponse ctl = angular_response(controlled, verify_grid, true);
  report.theta_grid = ctl.theta;
  report.phi_controlled = ctl.phi_s;
  report.phi_uncontrolled = base.phi_s;
  report.d_s_controlled = ctl.d_s;
  return report;
}

}  // namespace chemcompass
