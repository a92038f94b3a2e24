#include "chemcompass/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace chemcompass {

void OptimizerOptions::validate() const {
  if (max_evaluations <= 0 || initial_scale <= 0 || f_tol <= 0 || x_tol <= 0 ||
      restarts <= 0)
    throw std::invalid_argument("OptimizerOptions: all fields must be positive");
}

namespace {

double guarded(const Objective& f, const std::vector<double>& x, int& evals) {
  ++evals;
  double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

struct Simplex {
  std::vector<std::vector<double>> x;
  std::vector<double> f;

  void sort() {
    std::vector<std::size_t> idx(f.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    std::vector<std::vector<double>> nx(x.size());
    std::vector<double> nf(f.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      nx[i] = std::move(x[idx[i]]);
      nf[i] = f[idx[i]];
    }
    x = std::move(nx);
    f = std::move(nf);
  }

  double f_spread() const { return f.back() - f.front(); }

  double x_spread() const {
    double s = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
      for (std::size_t j = 0; j < x[i].size(); ++j)
        s = std::max(s, std::abs(x[i][j] - x[0][j]));
    return s;
  }
};

// One Nelder-Mead run from x0; updates the global best and returns on
// tolerance (true) or budget (false).
bool run_simplex(const Objective& f, const std::vector<double>& x0,
                 const OptimizerOptions& opts, double scale, int& evals,
                 std::vector<double>& best_x, double& best_f) {
  const std::size_t n = x0.size();
  constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  Simplex s;
  s.x.push_back(x0);
  s.f.push_back(guarded(f, x0, evals));
  for (std::size_t j = 0; j < n && evals < opts.max_evaluations; ++j) {
    std::vector<double> xj = x0;
    xj[j] += scale * std::max(std::abs(x0[j]), 1.0);
    s.x.push_back(xj);
    s.f.push_back(guarded(f, xj, evals));
  }
  while (s.x.size() < n + 1) {  // budget died during seeding; pad with copies
    s.x.push_back(x0);
    s.f.push_back(s.f[0]);
  }
  s.sort();
  if (s.f[0] < best_f) {
    best_f = s.f[0];
    best_x = s.x[0];
  }

  while (evals < opts.max_evaluations) {
    if (s.f_spread() <= opts.f_tol || s.x_spread() <= opts.x_tol) return true;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)  // best n vertices
      for (std::size_t j = 0; j < n; ++j) centroid[j] += s.x[i][j] / double(n);
    const std::vector<double>& worst = s.x[n];

    auto blend = [&](double t) {
      std::vector<double> out(n);
      for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + t * (centroid[j] - worst[j]);
      return out;
    };

    std::vector<double> xr = blend(alpha);
    double fr = guarded(f, xr, evals);
    if (fr < s.f[0]) {
      // expand only while the budget lasts; otherwise keep the reflection
      if (evals < opts.max_evaluations) {
        std::vector<double> xe = blend(gamma);
        double fe = guarded(f, xe, evals);
        if (fe < fr) {
          s.x[n] = std::move(xe);
          s.f[n] = fe;
        } else {
          s.x[n] = std::move(xr);
          s.f[n] = fr;
        }
      } else {
        s.x[n] = std::move(xr);
        s.f[n] = fr;
      }
    } else if (fr < s.f[n - 1]) {
      s.x[n] = std::move(xr);
      s.f[n] = fr;
    } else if (evals < opts.max_evaluations) {
      bool outside = fr < s.f[n];
      std::vector<double> xc = outside ? blend(rho) : blend(-rho);
      double fc = guarded(f, xc, evals);
      if (fc < std::min(fr, s.f[n])) {
        s.x[n] = std::move(xc);
        s.f[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n && evals < opts.max_evaluations; ++i) {
          for (std::size_t j = 0; j < n; ++j)
            s.x[i][j] = s.x[0][j] + sigma * (s.x[i][j] - s.x[0][j]);
          s.f[i] = guarded(f, s.x[i], evals);
        }
      }
    }
    s.sort();
    if (s.f[0] < best_f) {
      best_f = s.f[0];
      best_x = s.x[0];
    }
  }
  return false;
}

}  // namespace

OptimizationReport nelder_mead(const Objective& f, std::vector<double> x0,
                               const OptimizerOptions& opts) {
  opts.validate();
  if (x0.empty()) throw std::invalid_argument("nelder_mead: x0 must be non-empty");

  OptimizationReport report;
  int evals = 0;
  std::vector<double> best_x = x0;
  double best_f = std::numeric_limits<double>::infinity();
  bool last_converged = false;

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> jitter(0.0, opts.initial_scale);

  for (int r = 0; r < opts.restarts && evals < opts.max_evaluations; ++r) {
    std::vector<double> start = best_x;
    if (r > 0)  // re-seed around the incumbent
      for (double& v : start) v += jitter(rng) * std::max(std::abs(v), 1.0);
    int before = evals;
    last_converged = run_simplex(f, start, opts, opts.initial_scale, evals, best_x, best_f);
    report.restart_history.push_back(RestartRecord{best_f, evals - before});
  }

  report.best_parameters = std::move(best_x);
  report.best_objective = best_f;
  report.evaluations = evals;
  report.converged = last_converged;
  return report;
}

}  // namespace chemcompass
