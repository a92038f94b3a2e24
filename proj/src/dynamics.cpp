#include "chemcompass/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace chemcompass {

namespace {

Matrix conj_matrix(const Matrix& m) { return m.conjugate(); }

double clamp_yield(double raw, const char* who) {
  if (!(raw >= -1e-9 && raw <= 1.0 + 1e-9)) {
    std::ostringstream msg;
    msg << who << ": yield " << raw << " outside [-1e-9, 1+1e-9]; solver failure";
    throw std::runtime_error(msg.str());
  }
  return std::min(1.0, std::max(0.0, raw));
}

}  // namespace

Liouvillian build_liouvillian(const Matrix& h, const std::vector<Matrix>& lindblads) {
  const Eigen::Index n = h.rows();
  if (h.cols() != n) throw std::invalid_argument("build_liouvillian: H not square");
  const Matrix id = Matrix::Identity(n, n);

  // vec(H rho) = (I (x) H) vec(rho), vec(rho H) = (H^T (x) I) vec(rho)
  Matrix l = Complex(0, -1) * (kron(id, h) - kron(h.transpose(), id));
  bool any = false;
  for (const auto& lk : lindblads) {
    if (lk.rows() != n || lk.cols() != n)
      throw std::invalid_argument("build_liouvillian: Lindblad dimension mismatch");
    if (lk.cwiseAbs().maxCoeff() == 0.0) continue;
    any = true;
    Matrix ldl = lk.adjoint() * lk;
    l += 0.25 * (2.0 * kron(conj_matrix(lk), lk) - kron(id, ldl) -
                 kron(ldl.transpose(), id));
  }
  return Liouvillian{std::move(l), any};
}

double resolvent_yield(const Matrix& h, const std::vector<Matrix>& lindblads,
                       const Matrix& rho0, const Matrix& ps, double k) {
  if (!(k > 0)) throw std::invalid_argument("resolvent_yield: k must be > 0");
  const Eigen::Index n = h.rows();
  Liouvillian l = build_liouvillian(h, lindblads);
  Matrix a = k * Matrix::Identity(n * n, n * n) - l.m;
  Eigen::Map<const Vector> vec_rho(rho0.data(), n * n);
  Vector x = solve_linear(a, vec_rho);
  Eigen::Map<const Vector> vec_ps(ps.data(), n * n);
  return clamp_yield(k * vec_ps.dot(x).real(), "resolvent_yield");
}

double eigenbasis_yield(const Matrix& h, const Matrix& rho0, const Matrix& ps, double k) {
  if (!(k > 0)) throw std::invalid_argument("eigenbasis_yield: k must be > 0");
  HermitianEig eig = hermitian_eig(h);
  Matrix p = eig.vectors.adjoint() * ps * eig.vectors;
  Matrix r = eig.vectors.adjoint() * rho0 * eig.vectors;
  const Eigen::Index n = h.rows();
  Complex total = 0.0;
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index nn = 0; nn < n; ++nn) {
      double dl = eig.values(m) - eig.values(nn);
      total += k / Complex(k, dl) * p(nn, m) * r(m, nn);
    }
  return clamp_yield(total.real(), "eigenbasis_yield");
}

double singlet_yield_resolvent(const RadicalPairModel& model, const FieldDirection& dir) {
  model.validate();
  Matrix h = build_hamiltonian(model, dir);
  std::vector<Matrix> lbs;
  if (model.dephasing.gamma > 0) lbs = dephasing_operators(model.dephasing, model.dims());
  return resolvent_yield(h, lbs, initial_state(model), singlet_projector(model), model.k);
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double kC[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,      0.0,        500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784,  11.0 / 84,  0.0};
// b5 - b4: the embedded error estimate
constexpr double kE[7] = {71.0 / 57600,       0.0,         -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200,  22.0 / 525,  -1.0 / 40};

struct Rhs {
  const Matrix& h0;
  const Matrix* control_op;  // n_c . (S1 + S2), or null
  const ControlField* control;
  const std::vector<Matrix>& lindblads;
  std::vector<Matrix> ldl;  // precomputed L^+ L

  Matrix operator()(double t, const Matrix& rho) const {
    Matrix hrho;
    if (control_op != nullptr) {
      Matrix h = h0 + (kGammaE * control_value(*control, t)) * (*control_op);
      hrho = h * rho - rho * h;
    } else {
      hrho = h0 * rho - rho * h0;
    }
    Matrix out = Complex(0, -1) * hrho;
    for (std::size_t i = 0; i < lindblads.size(); ++i) {
      const Matrix& lk = lindblads[i];
      out += 0.25 * (2.0 * lk * rho * lk.adjoint() - ldl[i] * rho - rho * ldl[i]);
    }
    return out;
  }
};

}  // namespace

PropagationResult propagate(const RadicalPairModel& model, const FieldDirection& dir,
                            const ControlField* control, double t_end, double dt_max,
                            const PropagateOptions& opts) {
  model.validate();
  if (!(t_end > 0)) throw std::invalid_argument("propagate: t_end must be > 0");
  if (!(dt_max > 0)) throw std::invalid_argument("propagate: dt_max must be > 0");

  const auto dims = model.dims();
  Matrix h0 = build_hamiltonian(model, dir);
  Matrix ps = singlet_projector(model);
  std::vector<Matrix> lbs;
  if (model.dephasing.gamma > 0) lbs = dephasing_operators(model.dephasing, dims);

  // Step-size ceiling: resolve the fastest frequency in the problem.
  double a_max = 0.0;
  for (const auto& nuc : model.nuclei)
    a_max = std::max(a_max, nuc.hyperfine.t.cwiseAbs().maxCoeff());
  double scale = std::max({model.omega_b(), a_max, model.dephasing.gamma, model.k});
  Matrix control_op;
  if (control != nullptr) {
    scale = std::max({scale, kGammaE * amplitude_bound(*control), max_frequency(*control)});
    SpinOperators half = spin_operators(0.5);
    const int n = model.hilbert_dim();
    control_op = Matrix::Zero(n, n);
    for (int al = 0; al < 3; ++al) {
      if (control->direction[al] == 0.0) continue;
      Matrix s_al = (al == 0 ? half.sx : al == 1 ? half.sy : half.sz);
      control_op += control->direction[al] * (embed(s_al, 0, dims) + embed(s_al, 1, dims));
    }
  }
  const double h_grid_raw = std::min(dt_max, 1.0 / (50.0 * std::max(scale, 1e-12)));
  // Uniform sample grid with an even interval count (composite Simpson).
  std::size_t n_steps = static_cast<std::size_t>(std::ceil(t_end / h_grid_raw));
  n_steps += n_steps % 2;
  n_steps = std::max<std::size_t>(n_steps, 2);
  const double h_grid = t_end / double(n_steps);

  Rhs rhs{h0, control != nullptr ? &control_op : nullptr, control, lbs, {}};
  for (const auto& lk : lbs) rhs.ldl.push_back(lk.adjoint() * lk);

  Matrix rho = initial_state(model);
  PropagationResult result;
  result.t.reserve(n_steps + 1);
  result.f_s.reserve(n_steps + 1);
  result.t.push_back(0.0);
  result.f_s.push_back(std::clamp((ps * rho).trace().real(), 0.0, 1.0));

  Matrix stage[7];
  double dt = h_grid;
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double t0 = i * h_grid;
    const double t1 = (i + 1) * h_grid;
    double t = t0;
    while (t < t1 - 1e-15 * t_end) {
      double step = std::min(dt, t1 - t);
      if (opts.fixed_step) step = t1 - t;  // one classic-RK4-sized stride per sample
      bool accepted = false;
      while (!accepted) {
        stage[0] = rhs(t, rho);
        for (int s2 = 1; s2 < 7; ++s2) {
          Matrix y = rho;
          for (int j = 0; j < s2; ++j)
            if (kA[s2][j] != 0.0) y += (step * kA[s2][j]) * stage[j];
          stage[s2] = rhs(t + kC[s2] * step, y);
        }
        Matrix err = Matrix::Zero(rho.rows(), rho.cols());
        for (int j = 0; j < 7; ++j)
          if (kE[j] != 0.0) err += (step * kE[j]) * stage[j];
        const double err_norm = err.cwiseAbs().maxCoeff();
        if (opts.fixed_step || err_norm <= opts.abs_tol) {
          Matrix y = rho;
          for (int j = 0; j < 7; ++j)
            if (kB5[j] != 0.0) y += (step * kB5[j]) * stage[j];
          rho = std::move(y);
          t += step;
          accepted = true;
          if (!opts.fixed_step) {
            double grow = 0.9 * std::pow(opts.abs_tol / std::max(err_norm, 1e-300), 0.2);
            dt = std::min(h_grid, step * std::clamp(grow, 0.2, 5.0));
          }
        } else {
          double shrink = 0.9 * std::pow(opts.abs_tol / err_norm, 0.2);
          step *= std::clamp(shrink, 0.1, 0.9);
          if (step < 1e-12 * t_end)
            throw std::runtime_error("propagate: step size underflow");
        }
      }
    }
    const double trace_drift = std::abs(rho.trace().real() - 1.0) +
                               std::abs(rho.trace().imag());
    if (trace_drift > 1e-6) {
      std::ostringstream msg;
      msg << "propagate: trace drift " << trace_drift << " at t = " << t1
          << " us exceeds 1e-6";
      throw std::runtime_error(msg.str());
    }
    result.t.push_back(t1);
    result.f_s.push_back(std::clamp((ps * rho).trace().real(), 0.0, 1.0));
  }
  result.final_state = std::move(rho);
  return result;
}

QuadratureResult singlet_yield_quadrature(const PropagationResult& result, double k) {
  if (!(k > 0)) throw std::invalid_argument("singlet_yield_quadrature: k must be > 0");
  const std::size_t n = result.t.size();
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument(
        "singlet_yield_quadrature: need an odd number of uniform samples (even interval count)");
  const double t_end = result.t.back();
  if (t_end < 14.0 / k * (1.0 - 1e-12))
    throw std::invalid_argument("singlet_yield_quadrature: insufficient t_end (need >= 14/k)");
  const double h = result.t[1] - result.t[0];

  auto weighted = [&](std::size_t i) {
    return k * std::exp(-k * result.t[i]) * result.f_s[i];
  };
  double total = weighted(0) + weighted(n - 1);
  for (std::size_t i = 1; i + 1 < n; ++i) total += (i % 2 == 1 ? 4.0 : 2.0) * weighted(i);
  return QuadratureResult{total * h / 3.0, std::exp(-k * t_end)};
}

}  // namespace chemcompass
