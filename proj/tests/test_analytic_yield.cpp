#include "chemcompass/analytic_yield.hpp"

#include "chemcompass/dynamics.hpp"
#include "doctest.h"

#include <cmath>
#include <numbers>

using namespace chemcompass;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOmegaB = 8.099956;  // 46 uT at the electron gyromagnetic ratio

RadicalPairModel axial_model(double a, double k) {
  RadicalPairModel m;
  m.b_field_ut = 46.0;
  m.k = k;
  NucleusSpec nuc;
  nuc.hyperfine = HyperfineTensor::axial(a);
  m.nuclei = {nuc};
  return m;
}

}  // namespace

TEST_SUITE("analytic_yield") {

TEST_CASE("lorentzian factor anchor points") {
  CHECK(g_lorentz(0.0, 0.5) == doctest::Approx(1.0));
  CHECK(g_lorentz(0.5, 0.5) == doctest::Approx(0.5));
  CHECK(g_lorentz(2.0, 1.0) == doctest::Approx(0.2));
  CHECK(g_lorentz(-2.0, 1.0) == doctest::Approx(0.2));  // even in x
}

TEST_CASE("effective field composes the applied field and the bias") {
  auto aligned = effective_field(0.0, 1.0, 0.5);
  CHECK(aligned.b1 == doctest::Approx(1.5));
  CHECK(aligned.theta_p == doctest::Approx(0.0));
  CHECK_FALSE(aligned.degenerate);

  auto right = effective_field(kPi / 2, 3.0, 4.0);
  CHECK(right.b1 == doctest::Approx(5.0));
  CHECK(std::sin(right.theta_p) == doctest::Approx(3.0 / 5.0));
  CHECK(std::cos(right.theta_p) == doctest::Approx(4.0 / 5.0));

  auto cancelled = effective_field(0.0, 1.0, -1.0);
  CHECK(cancelled.degenerate);
}

TEST_CASE("single-branch yield in simple geometries") {
  AnalyticParams p{1.0, 0.0, 0.5};

  // bias parallel to the field: c = 1, only the g(B1 - B) term survives the
  // angle factors and Phi = 1/2 + 1/2 g(b_bias)
  auto par = yield_branch(0.0, 0.7, p);
  CHECK_FALSE(par.delegated);
  CHECK(par.value == doctest::Approx(0.5 + 0.5 * g_lorentz(0.7, p.k)));

  // zero bias: B1 = B, theta' = theta, c = 1, g(0) = 1 so the branch is inert
  auto inert = yield_branch(1.1, 0.0, p);
  CHECK(inert.value == doctest::Approx(1.0));
}

TEST_CASE("single branch matches a polarized-nucleus resolvent solve") {
  // theta = pi/2, B = omega_B, bias = a/2 with a = omega_B/3
  double a = kOmegaB / 3.0;
  AnalyticParams p{kOmegaB, a, 0.5};
  auto branch = yield_branch(kPi / 2, a / 2.0, p);
  REQUIRE_FALSE(branch.delegated);

  // same branch numerically: nucleus pinned in the |up> state
  RadicalPairModel m = axial_model(a, p.k);
  Matrix h = build_hamiltonian(m, FieldDirection{kPi / 2, 0.0});
  Matrix rho0 = Matrix::Zero(8, 8);
  Vector s(8);
  s.setZero();
  // singlet (0, 1, -1, 0)/sqrt(2) on the electron pair, nucleus up occupies
  // the even strided slots of the composite basis
  s(2) = 1.0 / std::sqrt(2.0);
  s(4) = -1.0 / std::sqrt(2.0);
  rho0 = s * s.adjoint();
  double numeric = resolvent_yield(h, {}, rho0, singlet_projector(m), p.k);
  CHECK(std::abs(branch.value - numeric) < 1e-8);
}

TEST_CASE("degenerate branch is delegated and still finite") {
  // bias exactly cancels the field along z
  AnalyticParams p{1.0, 2.0, 0.5};
  auto branch = yield_branch(0.0, -1.0, p);
  CHECK(branch.delegated);
  CHECK(branch.value >= 0.0);
  CHECK(branch.value <= 1.0);
}

TEST_CASE("branch-averaged yield basics") {
  AnalyticParams free{kOmegaB, 0.0, 0.5};
  CHECK(yield_avg(0.3, free) == doctest::Approx(1.0));  // no coupling, no mixing

  // mirror symmetry about the equator
  AnalyticParams p{kOmegaB, kOmegaB / 3.0, 0.5};
  for (int i = 0; i < 19; ++i) {
    double th = kPi * i / 18.0;
    CHECK(std::abs(yield_avg(th, p) - yield_avg(kPi - th, p)) < 1e-12);
  }

  // bounded
  for (int i = 0; i <= 24; ++i) {
    double th = kPi * i / 24.0;
    double v = yield_avg(th, p);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("closed form reproduces the operating-point contrast") {
  AnalyticParams p{kOmegaB, kOmegaB / 3.0, 0.5};
  double lo = yield_avg(0.0, p);
  double hi = yield_avg(kPi / 2, p);
  CHECK(std::abs((hi - lo) - 0.40274) < 5e-4);
}

TEST_CASE("closed form equals the resolvent across the parameter box") {
  for (double ratio : {0.1, 1.0 / 3.0, 1.0, 3.0, 10.0}) {
    for (double k : {0.25, 0.5, 2.0}) {
      double a = ratio * kOmegaB;
      AnalyticParams p{kOmegaB, a, k};
      RadicalPairModel m = axial_model(a, k);
      for (int i = 0; i < 19; ++i) {
        double th = kPi * i / 18.0;
        double closed = yield_avg(th, p);
        double numeric = singlet_yield_resolvent(m, FieldDirection{th, 0.0});
        CHECK(std::abs(closed - numeric) < 1e-8);
      }
    }
  }
}

TEST_CASE("strong-coupling limit approaches the quarter-law") {
  double a = 1000.0 * kOmegaB;
  AnalyticParams p{kOmegaB, a, 0.5};
  // residual field terms decay like g(a/2)
  double slack = 0.5 * g_lorentz(a / 2.0, p.k) + 1e-3;
  for (double th : {0.0, 0.6, kPi / 2}) {
    CHECK(std::abs(yield_avg(th, p) - regime1_approx(th)) < slack);
  }
}

TEST_CASE("quarter-law anchor values") {
  CHECK(regime1_approx(0.0) == doctest::Approx(0.5));
  CHECK(regime1_approx(kPi / 2) == doctest::Approx(0.25));
  CHECK(regime1_approx(kPi / 4) == doctest::Approx(0.375));
}

TEST_CASE("weak-field sensitivity law") {
  CHECK(weakfield_sensitivity(0.0, 0.5) == doctest::Approx(0.0));
  CHECK(weakfield_sensitivity(0.5, 0.5) == doctest::Approx(0.125));
  CHECK(weakfield_sensitivity(1e6, 0.5) == doctest::Approx(0.25).epsilon(1e-9));
}

}  // TEST_SUITE
