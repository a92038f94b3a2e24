#include "chemcompass/control_field.hpp"

#include <cmath>
#include <stdexcept>

namespace chemcompass {

namespace {

void check_steps(const StepSequence& s) {
  if (s.breakpoints.size() != s.amplitudes.size())
    throw std::invalid_argument("control: breakpoints and amplitudes must pair up");
  if (s.breakpoints.empty())
    throw std::invalid_argument("control: step sequence needs at least one breakpoint");
  for (std::size_t i = 0; i + 1 < s.breakpoints.size(); ++i)
    if (!(s.breakpoints[i] < s.breakpoints[i + 1]))
      throw std::invalid_argument("control: breakpoints must be strictly ascending");
  if (!(s.breakpoints.front() > 0))
    throw std::invalid_argument("control: first breakpoint must be positive");
}

}  // namespace

ControlField ControlField::harmonics(std::vector<HarmonicTerm> terms, double duration,
                                     double c_max) {
  ControlField c;
  c.shape = std::move(terms);
  c.duration = duration;
  c.c_max = c_max;
  return c;
}

ControlField ControlField::steps(std::vector<double> breakpoints,
                                 std::vector<double> amplitudes, double duration,
                                 double c_max) {
  ControlField c;
  StepSequence s{std::move(breakpoints), std::move(amplitudes)};
  check_steps(s);
  c.shape = std::move(s);
  c.duration = duration;
  c.c_max = c_max;
  return c;
}

double control_value(const ControlField& c, double t) {
  if (t < 0) throw std::invalid_argument("control_value: t must be >= 0");
  if (t >= c.duration) return 0.0;
  if (const auto* terms = std::get_if<std::vector<HarmonicTerm>>(&c.shape)) {
    double v = 0.0;
    for (const auto& h : *terms)
      v += h.a_sin * std::sin(h.omega * t) + h.b_cos * std::cos(h.omega * t);
    return v;
  }
  const auto& s = std::get<StepSequence>(c.shape);
  check_steps(s);
  for (std::size_t i = 0; i < s.breakpoints.size(); ++i)
    if (t < s.breakpoints[i]) return s.amplitudes[i];
  return 0.0;  // beyond the last breakpoint
}

Matrix control_hamiltonian(const ControlField& c, double t, const std::vector<int>& dims) {
  SpinOperators half = spin_operators(0.5);
  const Matrix sum_s[3] = {embed(half.sx, 0, dims) + embed(half.sx, 1, dims),
                           embed(half.sy, 0, dims) + embed(half.sy, 1, dims),
                           embed(half.sz, 0, dims) + embed(half.sz, 1, dims)};
  const double amp = kGammaE * control_value(c, t);
  int n = sum_s[0].rows();
  Matrix h = Matrix::Zero(n, n);
  for (int al = 0; al < 3; ++al)
    if (c.direction[al] != 0.0) h += amp * c.direction[al] * sum_s[al];
  return h;
}

double amplitude_bound(const ControlField& c) {
  if (const auto* terms = std::get_if<std::vector<HarmonicTerm>>(&c.shape)) {
    double b = 0.0;
    for (const auto& h : *terms) b += std::abs(h.a_sin) + std::abs(h.b_cos);
    return b;
  }
  const auto& s = std::get<StepSequence>(c.shape);
  double b = 0.0;
  for (double a : s.amplitudes) b = std::max(b, std::abs(a));
  return b;
}

double amplitude_violation(const ControlField& c, int samples) {
  double peak = 0.0;
  for (int i = 0; i < samples; ++i) {
    double t = c.duration * (i + 0.5) / samples;
    peak = std::max(peak, std::abs(control_value(c, t)));
  }
  return std::max(0.0, peak - c.c_max);
}

double max_frequency(const ControlField& c) {
  if (const auto* terms = std::get_if<std::vector<HarmonicTerm>>(&c.shape)) {
    double w = 0.0;
    for (const auto& h : *terms) w = std::max(w, std::abs(h.omega));
    return w;
  }
  return 0.0;
}

}  // namespace chemcompass
