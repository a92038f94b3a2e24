#include "chemcompass/sensitivity.hpp"

#include "chemcompass/analytic_yield.hpp"
#include "chemcompass/dynamics.hpp"
#include "doctest.h"

#include <cmath>
#include <numbers>

using namespace chemcompass;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOmegaB = 8.099956;

RadicalPairModel base_model(double a = kOmegaB / 3.0, double k = 0.5) {
  RadicalPairModel m;
  m.b_field_ut = 46.0;
  m.k = k;
  NucleusSpec nuc;
  nuc.hyperfine = HyperfineTensor::axial(a);
  m.nuclei = {nuc};
  return m;
}

}  // namespace

TEST_SUITE("sensitivity") {

TEST_CASE("flat evaluator has zero contrast") {
  auto r = angular_response([](double) { return 0.37; });
  CHECK(r.d_s == doctest::Approx(0.0));
  CHECK(r.phi_max == doctest::Approx(0.37));
  CHECK(r.phi_min == doctest::Approx(0.37));
  CHECK(r.theta.size() == 91);
  CHECK(r.phi_s.size() == 91);
}

TEST_CASE("quarter-law evaluator puts the extrema at the poles") {
  auto r = angular_response(regime1_approx);
  CHECK(r.d_s == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(r.theta_max == doctest::Approx(0.0).epsilon(1e-4));
  CHECK(std::abs(r.theta_min - kPi / 2) < 1e-4);
  CHECK(r.phi_max == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.phi_min == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("operating point response") {
  RadicalPairModel m = base_model();
  auto r = angular_response([&](double th) {
    return singlet_yield_resolvent(m, FieldDirection{th, 0.0});
  });
  CHECK(std::abs(r.d_s - 0.40274) < 5e-4);
  CHECK(std::abs(r.theta_max - kPi / 2) < 1e-3);
  CHECK(r.theta_min == doctest::Approx(0.0).epsilon(1e-3));
  // refined extrema dominate the grid samples
  for (std::size_t i = 0; i < r.phi_s.size(); ++i) {
    CHECK(r.phi_max >= r.phi_s[i] - 1e-9);
    CHECK(r.phi_min <= r.phi_s[i] + 1e-9);
  }
  // the stored samples sit exactly on the uniform grid
  for (std::size_t i = 0; i < r.theta.size(); ++i) {
    CHECK(r.theta[i] == doctest::Approx(kPi / 2 * double(i) / 90.0).epsilon(1e-12));
  }
}

TEST_CASE("full-range grid spans the meridian") {
  auto r = angular_response(regime1_approx, 91, true);
  CHECK(r.theta.back() == doctest::Approx(kPi));
  CHECK(r.d_s == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("grid size is validated") {
  CHECK_THROWS(angular_response([](double) { return 0.0; }, 8));
}

TEST_CASE("contrast ignores constant offsets and survives grid refinement") {
  AnalyticParams p{kOmegaB, kOmegaB / 3.0, 0.5};
  auto base = angular_response([&](double th) { return yield_avg(th, p); });
  auto shifted = angular_response([&](double th) { return yield_avg(th, p) + 0.11; });
  CHECK(std::abs(base.d_s - shifted.d_s) < 1e-12);

  auto fine = angular_response([&](double th) { return yield_avg(th, p); }, 181);
  CHECK(std::abs(base.d_s - fine.d_s) < 1e-4);
}

TEST_CASE("no coupling means no compass") {
  RadicalPairModel m = base_model(0.0);
  auto r = angular_response([&](double th) {
    return singlet_yield_resolvent(m, FieldDirection{th, 0.0});
  });
  CHECK(r.d_s < 1e-10);
}

TEST_CASE("axis substitution writes the right knob") {
  RadicalPairModel tmpl = base_model();

  auto ma = with_axis_value(tmpl, ScanAxis::HyperfineA, 5.0);
  CHECK(ma.nuclei[0].hyperfine.t(2, 2) == doctest::Approx(5.0));
  CHECK(ma.nuclei[0].hyperfine.t(0, 0) == doctest::Approx(0.0));

  auto mb = with_axis_value(tmpl, ScanAxis::FieldB, 4.6);
  CHECK(mb.b_field_ut == doctest::Approx(4.6));

  auto mk = with_axis_value(tmpl, ScanAxis::RateK, 2.0);
  CHECK(mk.k == doctest::Approx(2.0));

  auto mg = with_axis_value(tmpl, ScanAxis::DephasingGamma, 1.5);
  CHECK(mg.dephasing.gamma == doctest::Approx(1.5));

  RadicalPairModel bare = tmpl;
  bare.nuclei.clear();
  CHECK_THROWS(with_axis_value(bare, ScanAxis::HyperfineA, 1.0));
}

TEST_CASE("coupling scan finds the two response regimes") {
  RadicalPairModel tmpl = base_model();
  auto pts = sensitivity_scan(tmpl, ScanAxis::HyperfineA,
                              {kOmegaB / 3.0, 10.0 * kOmegaB});
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].ok);
  CHECK(pts[1].ok);
  CHECK(std::abs(pts[0].response.d_s - 0.40) < 0.01);
  CHECK(std::abs(pts[1].response.d_s - 0.25) < 0.02);
}

TEST_CASE("collective dephasing does not erase the compass") {
  RadicalPairModel tmpl = base_model();
  tmpl.dephasing.d = 1.0;
  auto pts = sensitivity_scan(tmpl, ScanAxis::DephasingGamma, {0.0, 2.0}, 41, true);
  REQUIRE(pts.size() == 2);
  REQUIRE(pts[0].ok);
  REQUIRE(pts[1].ok);
  CHECK(pts[1].response.d_s >= pts[0].response.d_s - 0.01);
}

TEST_CASE("fast recombination kills the contrast") {
  RadicalPairModel tmpl = base_model();
  auto pts = sensitivity_scan(tmpl, ScanAxis::RateK, {100.0}, 41);
  REQUIRE(pts[0].ok);
  CHECK(pts[0].response.d_s < 0.01);
}

TEST_CASE("a failing point is captured without aborting the scan") {
  RadicalPairModel tmpl = base_model();
  auto pts = sensitivity_scan(tmpl, ScanAxis::RateK, {-1.0, 0.5}, 41);
  REQUIRE(pts.size() == 2);
  CHECK_FALSE(pts[0].ok);
  CHECK_FALSE(pts[0].error.empty());
  CHECK(pts[1].ok);
  CHECK(pts[1].response.d_s > 0.3);
}

TEST_CASE("lifetime study: short lifetimes lose, long lifetimes gain") {
  RadicalPairModel tmpl = base_model();
  auto rows = lifetime_sensitivity(tmpl, {0.01, 2.0}, true);
  REQUIRE(rows.size() == 2);
  REQUIRE(rows[0].ok);
  REQUIRE(rows[1].ok);
  CHECK(rows[0].tau == doctest::Approx(0.01));
  CHECK(rows[0].d_s < 0.01);
  CHECK(rows[1].d_s > 0.35);
  CHECK(rows[1].best_a > 0.0);
}

TEST_CASE("lifetime study without optimization keeps the template coupling") {
  RadicalPairModel tmpl = base_model();
  auto rows = lifetime_sensitivity(tmpl, {2.0}, false);
  REQUIRE(rows[0].ok);
  CHECK(rows[0].best_a == doctest::Approx(kOmegaB / 3.0));
  CHECK(std::abs(rows[0].d_s - 0.40274) < 5e-4);
}

}  // TEST_SUITE
