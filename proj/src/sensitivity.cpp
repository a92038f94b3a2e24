#include "chemcompass/sensitivity.hpp"

#include "chemcompass/dynamics.hpp"
#include "chemcompass/optimize.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chemcompass {

namespace {

// Golden-section search for the maximum of f on [lo, hi] to xtol in theta.
// Returns the refined (theta, f(theta)).
std::pair<double, double> golden_max(const YieldFn& f, double lo, double hi, double xtol) {
  constexpr double invphi = 0.6180339887498949;
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > xtol) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = f(d);
    }
  }
  return fc > fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

}  // namespace

AngularResponse angular_response(const YieldFn& evaluator, int grid_size, bool full_range) {
  if (grid_size < 9) throw std::invalid_argument("angular_response: grid_size must be >= 9");
  const double span = full_range ? std::numbers::pi : std::numbers::pi / 2;

  AngularResponse out;
  out.theta.resize(grid_size);
  out.phi_s.resize(grid_size);
  int i_max = 0, i_min = 0;
  for (int i = 0; i < grid_size; ++i) {
    out.theta[i] = span * i / double(grid_size - 1);
    out.phi_s[i] = evaluator(out.theta[i]);
    if (out.phi_s[i] > out.phi_s[i_max]) i_max = i;
    if (out.phi_s[i] < out.phi_s[i_min]) i_min = i;
  }

  auto refine = [&](int i, double sign) {
    double lo = out.theta[std::max(i - 1, 0)];
    double hi = out.theta[std::min(i + 1, grid_size - 1)];
    YieldFn signed_f = [&](double th) { return sign * evaluator(th); };
    auto [th, v] = golden_max(signed_f, lo, hi, 1e-6);
    // never report an extremum weaker than the grid value it refines
    if (sign * v < out.phi_s[i]) return std::make_pair(out.theta[i], out.phi_s[i]);
    return std::make_pair(th, sign * v);
  };
  std::tie(out.theta_max, out.phi_max) = refine(i_max, 1.0);
  std::tie(out.theta_min, out.phi_min) = refine(i_min, -1.0);
  out.d_s = out.phi_max - out.phi_min;
  return out;
}

RadicalPairModel with_axis_value(const RadicalPairModel& tmpl, ScanAxis axis, double value) {
  RadicalPairModel m = tmpl;
  switch (axis) {
    case ScanAxis::HyperfineA:
      if (m.nuclei.empty())
        throw std::invalid_argument("sensitivity_scan: hyperfine axis needs a nucleus");
      m.nuclei[0].hyperfine = HyperfineTensor::axial(value, m.nuclei[0].hyperfine.electron);
      break;
    case ScanAxis::FieldB:
      m.b_field_ut = value;
      break;
    case ScanAxis::RateK:
      m.k = value;
      break;
    case ScanAxis::DephasingGamma:
      m.dephasing.gamma = value;
      break;
  }
  return m;
}

std::vector<ScanPoint> sensitivity_scan(const RadicalPairModel& tmpl, ScanAxis axis,
                                        const std::vector<double>& values, int grid_size,
                                        bool full_range) {
  std::vector<ScanPoint> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i].value = values[i];
    try {
      RadicalPairModel m = with_axis_value(tmpl, axis, values[i]);
      YieldFn f = [&m](double th) {
        return singlet_yield_resolvent(m, FieldDirection{th, 0.0});
      };
      out[i].response = angular_response(f, grid_size, full_range);
      out[i].ok = true;
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  }
  return out;
}

std::vector<LifetimeRow> lifetime_sensitivity(const RadicalPairModel& tmpl,
                                              const std::vector<double>& lifetimes,
                                              bool optimize_a) {
  std::vector<LifetimeRow> out(lifetimes.size());
  for (std::size_t i = 0; i < lifetimes.size(); ++i) {
    out[i].tau = lifetimes[i];
    try {
      if (!(lifetimes[i] > 0))
        throw std::invalid_argument("lifetime_sensitivity: lifetimes must be > 0");
      RadicalPairModel m = tmpl;
      m.k = 1.0 / lifetimes[i];
      if (optimize_a) {
        // optimum can sit far above omega_B at weak fields, so give the
        // 1-parameter search plenty of headroom
        double hi = 50.0 * std::max(m.omega_b(), m.k);
        // the response is multimodal in a at weak fields: an omega_B-scale
        // peak, a dip, then a strong-coupling plateau. A coarse log scan
        // picks the better basin before the simplex polishes it.
        auto response_at = [&m](double a) {
          RadicalPairModel cand = hyperfine_model(m, 1, TensorForm::Axial, {a});
          if (cand.dephasing.gamma > 0) {
            YieldFn f = [&cand](double th) {
              return singlet_yield_resolvent(cand, FieldDirection{th, 0.0});
            };
            return angular_response(f, 91, true).d_s;
          }
          Matrix rho0 = initial_state(cand);
          Matrix ps = singlet_projector(cand);
          YieldFn f = [&cand, &rho0, &ps](double th) {
            Matrix h = build_hamiltonian(cand, FieldDirection{th, 0.0});
            return eigenbasis_yield(h, rho0, ps, cand.k);
          };
          return angular_response(f).d_s;
        };
        double seed_a = hi, seed_d = response_at(hi);
        for (int s = 0; s < 16; ++s) {
          double a = hi * std::pow(10.0, -4.0 + 4.0 * s / 16.0);
          double d = response_at(a);
          if (d > seed_d) { seed_d = d; seed_a = a; }
        }
        RadicalPairModel seeded = hyperfine_model(m, 1, TensorForm::Axial, {seed_a});
        OptimizerOptions opts;
        opts.max_evaluations = 400;
        opts.restarts = 2;
        OptimizationReport rep =
            optimize_hyperfine(seeded, 1, TensorForm::Axial, {{0.0, hi}}, opts);
        out[i].best_a = rep.best_parameters.at(0);
        out[i].d_s = rep.best_objective;
      } else {
        if (m.nuclei.empty())
          throw std::invalid_argument("lifetime_sensitivity: template needs a nucleus");
        out[i].best_a = m.nuclei[0].hyperfine.t(2, 2);
        YieldFn f = [&m](double th) {
          return singlet_yield_resolvent(m, FieldDirection{th, 0.0});
        };
        out[i].d_s = angular_response(f).d_s;
      }
      out[i].ok = true;
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  }
  return out;
}

}  // namespace chemcompass
