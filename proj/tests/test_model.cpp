#include "chemcompass/model.hpp"

#include "doctest.h"

#include <numbers>
#include <random>

using namespace chemcompass;

namespace {

constexpr double kPi = std::numbers::pi;

RadicalPairModel one_nucleus_model(double a) {
  RadicalPairModel m;
  m.b_field_ut = 46.0;
  m.k = 0.5;
  NucleusSpec nuc;
  nuc.hyperfine = HyperfineTensor::axial(a);
  m.nuclei = {nuc};
  return m;
}

// |S> = (|ud> - |du>)/sqrt(2) in the |uu>,|ud>,|du>,|dd> electron basis
Vector singlet_ket() {
  Vector s = Vector::Zero(4);
  s(1) = 1.0 / std::sqrt(2.0);
  s(2) = -1.0 / std::sqrt(2.0);
  return s;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("field conversion: 46 uT gives 8.100 rad/us") {
  RadicalPairModel m = one_nucleus_model(1.0);
  CHECK(m.omega_b() == doctest::Approx(8.099956).epsilon(1e-9));
}

TEST_CASE("hamiltonian at theta 0 is diagonal with a/4 hyperfine splitting") {
  double a = 2.7;
  RadicalPairModel m = one_nucleus_model(a);
  Matrix h = build_hamiltonian(m, FieldDirection{0.0, 0.0});
  REQUIRE(h.rows() == 8);

  double offdiag = (h - Matrix(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
  CHECK(offdiag < 1e-14);
  // |up up; nuclear up>: Zeeman omega_B, hyperfine +a/4
  CHECK(h(0, 0).real() == doctest::Approx(m.omega_b() + a / 4.0));
  // |up up; nuclear down>: hyperfine flips sign
  CHECK(h(1, 1).real() == doctest::Approx(m.omega_b() - a / 4.0));
}

TEST_CASE("singlet is a Zeeman eigenstate when the coupling vanishes") {
  RadicalPairModel m;
  m.b_field_ut = 46.0;
  m.k = 0.5;  // no nuclei
  Matrix h = build_hamiltonian(m, FieldDirection{1.1, 0.4});
  CHECK((h * singlet_ket()).norm() < 1e-12);
}

TEST_CASE("hamiltonian is hermitian for random models") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 5; ++trial) {
    RadicalPairModel m = one_nucleus_model(0.0);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m.nuclei[0].hyperfine.t(r, c) = u(rng);
    Matrix h = build_hamiltonian(m, FieldDirection{u(rng) + 3.0, u(rng)});
    CHECK(hermiticity_error(h) < 1e-12);
  }
}

TEST_CASE("axial spectrum is independent of phi") {
  RadicalPairModel m = one_nucleus_model(2.7);
  auto ev = [&](double phi) {
    return hermitian_eig(build_hamiltonian(m, FieldDirection{0.9, phi})).values;
  };
  CHECK((ev(0.0) - ev(2.2)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("initial state: pure singlet times maximally mixed nuclei") {
  RadicalPairModel bare;
  bare.k = 0.5;
  Matrix rho_bare = initial_state(bare);
  CHECK(std::abs(rho_bare.trace() - Complex(1, 0)) < 1e-14);
  CHECK((rho_bare * rho_bare - rho_bare).cwiseAbs().maxCoeff() < 1e-14);  // rank 1

  RadicalPairModel m = one_nucleus_model(2.7);
  Matrix rho = initial_state(m);
  auto e = hermitian_eig(rho);
  CHECK(std::abs(rho.trace() - Complex(1, 0)) < 1e-14);
  CHECK(e.values.maxCoeff() == doctest::Approx(0.5));
  CHECK(e.values.minCoeff() > -1e-14);

  // fully singlet initially, for any nucleus count
  CHECK(std::abs((initial_state(m) * singlet_projector(m)).trace() - Complex(1, 0)) <
        1e-13);
}

TEST_CASE("singlet projector structure") {
  RadicalPairModel bare;
  bare.k = 0.5;
  Matrix p = singlet_projector(bare);
  CHECK(p(1, 1).real() == doctest::Approx(0.5));
  CHECK(p(2, 2).real() == doctest::Approx(0.5));
  CHECK(p(1, 2).real() == doctest::Approx(-0.5));
  CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-14);

  RadicalPairModel m = one_nucleus_model(2.7);
  Matrix pn = singlet_projector(m);
  CHECK(std::abs(pn.trace() - Complex(2, 0)) < 1e-13);
  CHECK((pn * pn - pn).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("initial state commutes with nuclear unitaries") {
  RadicalPairModel m = one_nucleus_model(2.7);
  Matrix rho = initial_state(m);
  // nuclear x rotation exp(-i alpha sigma_x / 2), identity on the electrons
  auto nuc = spin_operators(0.5);
  double alpha = 0.7;
  Matrix u_nuc = std::cos(alpha / 2.0) * Matrix::Identity(2, 2) -
                 Complex(0.0, 2.0 * std::sin(alpha / 2.0)) * nuc.sx;
  Matrix u = embed(u_nuc, 2, m.dims());
  CHECK((u * rho - rho * u).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dephasing operators at the three reference correlations") {
  std::vector<int> dims{2, 2};
  auto el = spin_operators(0.5);
  Matrix sz1 = 2.0 * embed(el.sz, 0, dims);
  Matrix sz2 = 2.0 * embed(el.sz, 1, dims);

  double gamma = 0.8;
  auto l0 = dephasing_operators(DephasingSpec{gamma, 0.0}, dims);
  REQUIRE(l0.size() == 2);
  CHECK((l0[0] - std::sqrt(gamma) * sz1).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((l0[1] - std::sqrt(gamma) * sz2).cwiseAbs().maxCoeff() < 1e-12);

  auto l1 = dephasing_operators(DephasingSpec{gamma, 1.0}, dims);
  CHECK((l1[0] - l1[1]).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((l1[0] - std::sqrt(gamma / 2.0) * (sz1 + sz2)).cwiseAbs().maxCoeff() < 1e-12);
  // correlated operator annihilates the zero-magnetization singlet
  CHECK((l1[0] * singlet_ket()).norm() < 1e-12);

  auto lz = dephasing_operators(DephasingSpec{0.0, 0.3}, dims);
  for (const auto& l : lz) CHECK(l.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("validation rejects broken models") {
  RadicalPairModel m = one_nucleus_model(2.7);
  CHECK_NOTHROW(m.validate());

  RadicalPairModel bad = m;
  bad.k = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = m;
  bad.b_field_ut = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = m;
  bad.nuclei[0].spin = 0.3;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = m;
  bad.nuclei[0].hyperfine.electron = 3;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = m;
  bad.dephasing.gamma = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = m;  // 4 * 4^3 = 256 > 32
  bad.nuclei.assign(3, NucleusSpec{1.5, HyperfineTensor::axial(1.0)});
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("theta range covers the full sphere meridian") {
  RadicalPairModel m = one_nucleus_model(2.7);
  Matrix h0 = build_hamiltonian(m, FieldDirection{0.0, 0.0});
  Matrix hpi = build_hamiltonian(m, FieldDirection{kPi, 0.0});
  // field reversed along z: Zeeman flips, hyperfine does not
  auto el = spin_operators(0.5);
  Matrix sz_tot =
      embed(el.sz, 0, m.dims()) + embed(el.sz, 1, m.dims());
  CHECK(((h0 - hpi) - 2.0 * m.omega_b() * sz_tot).cwiseAbs().maxCoeff() < 1e-12);
}

}  // TEST_SUITE
