#include "chemcompass/commands.hpp"

#include "chemcompass/analytic_yield.hpp"
#include "chemcompass/dynamics.hpp"
#include "chemcompass/optimize.hpp"
#include "chemcompass/sweep.hpp"
#include "chemcompass/version.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace chemcompass {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / double(n - 1);
  return v;
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v = linspace(std::log(lo), std::log(hi), n);
  for (double& x : v) x = std::exp(x);
  return v;
}

ResultTable new_table(const ExperimentConfig& cfg, const std::string& command,
                      std::vector<std::string> cols) {
  ResultTable t;
  t.columns = std::move(cols);
  t.add_meta("tool", std::string("chemcompass ") + kVersion);
  t.add_meta("command", command);
  std::string resolved = resolved_config(cfg);
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a64(resolved)));
  t.add_meta("config_fnv1a64", hash);
  t.add_meta("cfg", resolved);
  return t;
}

void stamp_wall_time(ResultTable& t, Clock::time_point t0) {
  double s = std::chrono::duration<double>(Clock::now() - t0).count();
  t.add_meta("wall_time_s", format_value(s, 6));
}

// Failed sweep points become NaN rows (with the x value kept) plus an error
// note in the header, so one bad point never loses the rest of the scan.
void append_points(ResultTable& t, const std::vector<double>& xs,
                   const std::vector<SweepPoint>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].ok) {
      t.add_row(pts[i].values);
    } else {
      std::vector<double> row(t.columns.size(), kNaN);
      row[0] = xs[i];
      t.add_row(row);
      t.add_meta("error_row_" + std::to_string(i), pts[i].error);
    }
  }
}

bool closed_form_applies(const RadicalPairModel& m) {
  if (m.dephasing.gamma != 0.0 || m.nuclei.size() != 1) return false;
  const auto& n = m.nuclei[0];
  if (n.spin != 0.5) return false;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (!(r == 2 && c == 2) && n.hyperfine.t(r, c) != 0.0) return false;
  return true;
}

// Fastest exact Phi_S(theta) for a static model: closed form when it applies,
// the eigenbasis sum for other closed models, the resolvent under dephasing.
YieldFn static_yield_fn(const RadicalPairModel& m) {
  if (closed_form_applies(m)) {
    AnalyticParams p{m.omega_b(), m.nuclei[0].hyperfine.t(2, 2), m.k};
    return [p](double th) { return yield_avg(th, p); };
  }
  if (m.dephasing.gamma > 0.0)
    return [m](double th) { return singlet_yield_resolvent(m, FieldDirection{th, 0.0}); };
  auto rho0 = initial_state(m);
  auto ps = singlet_projector(m);
  return [m, rho0, ps](double th) {
    return eigenbasis_yield(build_hamiltonian(m, FieldDirection{th, 0.0}), rho0, ps, m.k);
  };
}

std::string d_tag(double v) { return format_value(v, 6); }

OptimizerOptions optimizer_options(const ExperimentConfig& cfg) {
  OptimizerOptions opts;
  opts.max_evaluations = cfg.budget;
  opts.restarts = cfg.restarts;
  opts.seed = cfg.seed;
  return opts;
}

// Shared by fig2 and `optimize` with a control target.
void control_tables(const ExperimentConfig& cfg, const std::string& command,
                    const std::string& prefix, bool with_traces, CommandOutput& out) {
  auto t0 = Clock::now();
  const auto& m = cfg.model;

  ControlTemplate tmpl;
  tmpl.kind = (cfg.control == "harmonic") ? ControlTemplate::Kind::Harmonic
                                          : ControlTemplate::Kind::Piecewise;
  tmpl.count = (cfg.control == "harmonic") ? cfg.terms : cfg.segments;
  ControlConstraints cns;
  cns.c_max = cfg.c_max_ut;
  cns.omega_max = cfg.omega_max;
  cns.duration = cfg.duration_us;

  ControlOptimizationReport rep = optimize_control(m, tmpl, cns, optimizer_options(cfg));

  ResultTable yield_t =
      new_table(cfg, command, {"theta_rad", "phi_uncontrolled", "phi_controlled"});
  for (std::size_t i = 0; i < rep.theta_grid.size(); ++i)
    yield_t.add_row({rep.theta_grid[i], rep.phi_uncontrolled[i], rep.phi_controlled[i]});
  yield_t.add_meta("d_s_controlled", format_value(rep.d_s_controlled, 17));
  yield_t.add_meta("d_s_uncontrolled", format_value(rep.d_s_uncontrolled, 17));
  yield_t.add_meta("search_contrast", format_value(rep.best_objective, 17));
  yield_t.add_meta("evaluations", std::to_string(rep.evaluations));
  yield_t.add_meta("converged", rep.converged ? "1" : "0");

  ResultTable params_t = (tmpl.kind == ControlTemplate::Kind::Harmonic)
                             ? new_table(cfg, command,
                                         {"term", "a_sin_ut", "b_cos_ut", "omega_rad_us"})
                             : new_table(cfg, command, {"segment", "t_end_us", "amplitude_ut"});
  if (auto* harm = std::get_if<std::vector<HarmonicTerm>>(&rep.best_control.shape)) {
    for (std::size_t i = 0; i < harm->size(); ++i)
      params_t.add_row({double(i), (*harm)[i].a_sin, (*harm)[i].b_cos, (*harm)[i].omega});
  } else {
    const auto& st = std::get<StepSequence>(rep.best_control.shape);
    for (std::size_t i = 0; i < st.breakpoints.size(); ++i)
      params_t.add_row({double(i), st.breakpoints[i], st.amplitudes[i]});
  }
  params_t.add_meta("duration_us", format_value(rep.best_control.duration, 17));

  stamp_wall_time(yield_t, t0);
  out.tables.emplace_back(prefix + "_yield", std::move(yield_t));
  out.tables.emplace_back(prefix + "_params", std::move(params_t));

  if (!with_traces) return;

  double t_end = std::max(14.0 / m.k, rep.best_control.duration + 2.0 / m.k);
  double dt_max = t_end / 1000.0;
  auto trace_pair = [&](const ControlField* ctl) {
    PropagationResult a = propagate(m, FieldDirection{0.0, 0.0}, ctl, t_end, dt_max);
    PropagationResult b = propagate(m, FieldDirection{kPi / 2.0, 0.0}, ctl, t_end, dt_max);
    ResultTable t = new_table(cfg, command, {"t_us", "fs_theta0", "fs_theta_pi2"});
    for (std::size_t i = 0; i < a.t.size(); ++i) t.add_row({a.t[i], a.f_s[i], b.f_s[i]});
    return t;
  };
  out.tables.emplace_back(prefix + "_traces_free", trace_pair(nullptr));
  out.tables.emplace_back(prefix + "_traces_controlled", trace_pair(&rep.best_control));
}

}  // namespace

CommandOutput cmd_yield(const ExperimentConfig& cfg) {
  auto t0 = Clock::now();
  const auto& m = cfg.model;
  const bool closed = closed_form_applies(m);
  const double hi = cfg.full_theta ? kPi : kPi / 2.0;
  std::vector<double> thetas = linspace(0.0, hi, cfg.theta_points);

  std::vector<std::string> cols{"theta_rad", "phi_s_resolvent"};
  if (closed) {
    cols.push_back("phi_s_closed_form");
    cols.push_back("abs_diff");
  }
  ResultTable table = new_table(cfg, "yield", std::move(cols));

  auto pts = parallel_sweep(thetas.size(), cfg.jobs, [&](std::size_t i) {
    double th = thetas[i];
    double r = singlet_yield_resolvent(m, FieldDirection{th, 0.0});
    if (!closed) return std::vector<double>{th, r};
    double c = yield_avg(th, AnalyticParams{m.omega_b(), m.nuclei[0].hyperfine.t(2, 2), m.k});
    return std::vector<double>{th, r, c, std::abs(r - c)};
  });
  append_points(table, thetas, pts);
  stamp_wall_time(table, t0);

  CommandOutput out;
  out.tables.emplace_back("yield", std::move(table));
  return out;
}

CommandOutput cmd_fig1(const ExperimentConfig& cfg) {
  auto t0 = Clock::now();
  const auto& m = cfg.model;
  if (m.nuclei.empty())
    throw std::invalid_argument("fig1 needs at least one nucleus in the model");

  std::vector<double> ratios = cfg.scan_log
                                   ? logspace(cfg.scan_min, cfg.scan_max, cfg.scan_points)
                                   : linspace(cfg.scan_min, cfg.scan_max, cfg.scan_points);

  CommandOutput out;
  {
    ResultTable t = new_table(
        cfg, "fig1", {"a_over_omega_b", "a_rad_us", "d_s", "theta_max", "theta_min"});
    auto pts = parallel_sweep(ratios.size(), cfg.jobs, [&](std::size_t i) {
      double a = ratios[i] * m.omega_b();
      RadicalPairModel mi = with_axis_value(m, ScanAxis::HyperfineA, a);
      AngularResponse ar = angular_response(static_yield_fn(mi), cfg.grid, cfg.full_theta);
      return std::vector<double>{ratios[i], a, ar.d_s, ar.theta_max, ar.theta_min};
    });
    append_points(t, ratios, pts);
    stamp_wall_time(t, t0);
    out.tables.emplace_back("fig1_scan", std::move(t));
  }
  {
    ResultTable t =
        new_table(cfg, "fig1", {"tau_us", "k_per_us", "a_rad_us", "d_s", "ok"});
    auto rows = lifetime_sensitivity(m, cfg.lifetimes_us, cfg.optimize_a);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      t.add_row({r.tau, 1.0 / r.tau, r.ok ? r.best_a : kNaN, r.ok ? r.d_s : kNaN,
                 r.ok ? 1.0 : 0.0});
      if (!r.ok) t.add_meta("error_row_" + std::to_string(i), r.error);
    }
    out.tables.emplace_back("fig1_lifetime", std::move(t));
  }
  if (cfg.contour) {
    std::vector<double> b_values =
        cfg.values.empty() ? std::vector<double>{4.6, 46.0, 460.0} : cfg.values;
    std::size_t n = b_values.size() * ratios.size();
    ResultTable t = new_table(cfg, "fig1", {"b_ut", "a_over_omega_b", "a_rad_us", "d_s"});
    auto pts = parallel_sweep(n, cfg.jobs, [&](std::size_t idx) {
      double b = b_values[idx / ratios.size()];
      double ratio = ratios[idx % ratios.size()];
      RadicalPairModel mi = with_axis_value(m, ScanAxis::FieldB, b);
      mi = with_axis_value(mi, ScanAxis::HyperfineA, ratio * mi.omega_b());
      AngularResponse ar = angular_response(static_yield_fn(mi), cfg.grid, cfg.full_theta);
      return std::vector<double>{b, ratio, ratio * mi.omega_b(), ar.d_s};
    });
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = b_values[i / ratios.size()];
    append_points(t, xs, pts);
    out.tables.emplace_back("fig1_contour", std::move(t));
  }
  return out;
}

CommandOutput cmd_fig2(const ExperimentConfig& cfg) {
  CommandOutput out;
  control_tables(cfg, "fig2", "fig2", true, out);
  return out;
}

CommandOutput cmd_fig3(const ExperimentConfig& cfg) {
  auto t0 = Clock::now();
  const auto& m = cfg.model;
  std::vector<double> gammas = linspace(0.0, cfg.gamma_max, cfg.gamma_points);
  const std::size_t ng = gammas.size(), nd = cfg.d_values.size();

  CommandOutput out;
  {
    // One angular response per (gamma, d); assembled into one row per gamma.
    auto pts = parallel_sweep(ng * nd, cfg.jobs, [&](std::size_t idx) {
      RadicalPairModel mi = m;
      mi.dephasing.gamma = gammas[idx % ng];
      mi.dephasing.d = cfg.d_values[idx / ng];
      AngularResponse ar = angular_response(static_yield_fn(mi), cfg.grid, true);
      return std::vector<double>{ar.d_s};
    });
    std::vector<std::string> cols{"gamma_per_us"};
    for (double d : cfg.d_values) cols.push_back("d_s_d" + d_tag(d));
    ResultTable t = new_table(cfg, "fig3", std::move(cols));
    for (std::size_t g = 0; g < ng; ++g) {
      std::vector<double> row{gammas[g]};
      for (std::size_t di = 0; di < nd; ++di) {
        const auto& p = pts[di * ng + g];
        row.push_back(p.ok ? p.values[0] : kNaN);
        if (!p.ok)
          t.add_meta("error_gamma" + d_tag(gammas[g]) + "_d" + d_tag(cfg.d_values[di]),
                     p.error);
      }
      t.add_row(row);
    }
    stamp_wall_time(t, t0);
    out.tables.emplace_back("fig3_scan", std::move(t));
  }
  {
    std::vector<double> thetas = linspace(0.0, kPi, cfg.theta_points);
    const std::size_t nc = cfg.curve_gammas.size();
    auto pts = parallel_sweep(nc * thetas.size(), cfg.jobs, [&](std::size_t idx) {
      RadicalPairModel mi = m;
      mi.dephasing.gamma = cfg.curve_gammas[idx / thetas.size()];
      mi.dephasing.d = 0.0;
      double th = thetas[idx % thetas.size()];
      return std::vector<double>{singlet_yield_resolvent(mi, FieldDirection{th, 0.0})};
    });
    std::vector<std::string> cols{"theta_rad"};
    for (double g : cfg.curve_gammas) cols.push_back("phi_gamma" + d_tag(g));
    ResultTable t = new_table(cfg, "fig3", std::move(cols));
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      std::vector<double> row{thetas[i]};
      for (std::size_t c = 0; c < nc; ++c) {
        const auto& p = pts[c * thetas.size() + i];
        row.push_back(p.ok ? p.values[0] : kNaN);
      }
      t.add_row(row);
    }
    out.tables.emplace_back("fig3_curves", std::move(t));
  }
  return out;
}

CommandOutput cmd_optimize(const ExperimentConfig& cfg) {
  if (cfg.optimize_target == "control") {
    CommandOutput out;
    control_tables(cfg, "optimize", "optimize_control", false, out);
    return out;
  }

  auto t0 = Clock::now();
  TensorForm form = (cfg.tensor_form == "axial") ? TensorForm::Axial : TensorForm::Diagonal;
  OptimizationReport rep =
      optimize_hyperfine(cfg.model, cfg.n_nuclei, form, {}, optimizer_options(cfg));
  RadicalPairModel best = hyperfine_model(cfg.model, cfg.n_nuclei, form, rep.best_parameters);

  CommandOutput out;
  {
    ResultTable t = (form == TensorForm::Axial)
                        ? new_table(cfg, "optimize", {"nucleus", "a_rad_us"})
                        : new_table(cfg, "optimize",
                                    {"nucleus", "tx_rad_us", "ty_rad_us", "tz_rad_us"});
    for (int j = 0; j < cfg.n_nuclei; ++j) {
      if (form == TensorForm::Axial)
        t.add_row({double(j), rep.best_parameters[j]});
      else
        t.add_row({double(j), rep.best_parameters[3 * j], rep.best_parameters[3 * j + 1],
                   rep.best_parameters[3 * j + 2]});
    }
    t.add_meta("best_d_s", format_value(rep.best_objective, 17));
    t.add_meta("evaluations", std::to_string(rep.evaluations));
    t.add_meta("converged", rep.converged ? "1" : "0");
    // ready to paste back into a [model] section
    for (int j = 0; j < cfg.n_nuclei; ++j) {
      std::string snip =
          (form == TensorForm::Axial)
              ? "nucleus = axial " + format_value(rep.best_parameters[j], 17)
              : "nucleus = diagonal " + format_value(rep.best_parameters[3 * j], 17) + " " +
                    format_value(rep.best_parameters[3 * j + 1], 17) + " " +
                    format_value(rep.best_parameters[3 * j + 2], 17);
      t.add_meta("snippet_" + std::to_string(j), snip);
    }
    stamp_wall_time(t, t0);
    out.tables.emplace_back("optimize_params", std::move(t));
  }
  {
    ResultTable t = new_table(cfg, "optimize", {"restart", "best_d_s", "evaluations"});
    for (std::size_t i = 0; i < rep.restart_history.size(); ++i)
      t.add_row({double(i), rep.restart_history[i].best,
                 double(rep.restart_history[i].evaluations)});
    out.tables.emplace_back("optimize_restarts", std::move(t));
  }
  {
    const double hi = cfg.full_theta ? kPi : kPi / 2.0;
    std::vector<double> thetas = linspace(0.0, hi, cfg.theta_points);
    ResultTable t = new_table(cfg, "optimize", {"theta_rad", "phi_s"});
    YieldFn fn = static_yield_fn(best);
    auto pts = parallel_sweep(thetas.size(), cfg.jobs, [&](std::size_t i) {
      return std::vector<double>{thetas[i], fn(thetas[i])};
    });
    append_points(t, thetas, pts);
    out.tables.emplace_back("optimize_curve", std::move(t));
  }
  return out;
}

CommandOutput cmd_sweep(const ExperimentConfig& cfg) {
  auto t0 = Clock::now();
  const auto& m = cfg.model;
  ScanAxis axis;
  if (cfg.axis == "a")
    axis = ScanAxis::HyperfineA;
  else if (cfg.axis == "b")
    axis = ScanAxis::FieldB;
  else if (cfg.axis == "k")
    axis = ScanAxis::RateK;
  else
    axis = ScanAxis::DephasingGamma;

  std::vector<double> values = cfg.values;
  if (values.empty())
    values = cfg.scan_log ? logspace(cfg.scan_min, cfg.scan_max, cfg.scan_points)
                          : linspace(cfg.scan_min, cfg.scan_max, cfg.scan_points);
  const bool full = cfg.full_theta || axis == ScanAxis::DephasingGamma;

  ResultTable t = new_table(
      cfg, "sweep", {"value", "d_s", "theta_max", "phi_max", "theta_min", "phi_min"});
  t.add_meta("axis", cfg.axis);
  auto pts = parallel_sweep(values.size(), cfg.jobs, [&](std::size_t i) {
    RadicalPairModel mi = with_axis_value(m, axis, values[i]);
    AngularResponse ar = angular_response(static_yield_fn(mi), cfg.grid, full);
    return std::vector<double>{values[i], ar.d_s,     ar.theta_max,
                               ar.phi_max, ar.theta_min, ar.phi_min};
  });
  append_points(t, values, pts);
  stamp_wall_time(t, t0);

  CommandOutput out;
  out.tables.emplace_back("sweep", std::move(t));
  return out;
}

}  // namespace chemcompass
