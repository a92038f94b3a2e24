#pragma once

// Radical-pair problem definition: two electron spins, one of them (the probe,
// electron 2 by default) hyperfine-coupled to a set of nuclear spins, a static
// magnetic field of fixed magnitude and variable direction, equal singlet and
// triplet recombination rates, and optional electron pure dephasing.

#include "chemcompass/spin_algebra.hpp"

#include <vector>

namespace chemcompass {

// Electron gyromagnetic ratio magnitude in rad us^-1 uT^-1; fields entered in
// microtesla are converted to angular frequencies at the input boundary. The
// sign is dropped: the singlet yield is invariant under a global field sign
// flip (checked by a property test), so H carries +omega_B.
inline constexpr double kGammaE = 0.1760860;

// Internal unit convention: every Hamiltonian term is an angular frequency in
// rad/us; rates (k, gamma) are in 1/us. The closed-form yield treats both as
// plain inverse time.

struct HyperfineTensor {
  Eigen::Matrix3d t = Eigen::Matrix3d::Zero();  // rad/us
  int electron = 2;                             // 1 or 2; which electron it couples to

  static HyperfineTensor axial(double a, int electron = 2);
  static HyperfineTensor diagonal(double tx, double ty, double tz, int electron = 2);
};

struct NucleusSpec {
  double spin = 0.5;
  HyperfineTensor hyperfine;
};

struct DephasingSpec {
  double gamma = 0.0;  // 1/us, >= 0; 0 means closed-system dynamics
  double d = 0.0;      // correlation parameter: 0 uncorrelated, 1 correlated, -1 anti
};

struct FieldDirection {
  double theta = 0.0;  // polar angle in [0, pi]
  double phi = 0.0;    // azimuthal angle; yields are phi-independent for axial tensors
};

struct RadicalPairModel {
  double b_field_ut = 46.0;  // magnitude in uT
  double k = 0.5;            // recombination rate, 1/us (k_S = k_T = k)
  std::vector<NucleusSpec> nuclei;
  DephasingSpec dephasing;

  double omega_b() const { return kGammaE * b_field_ut; }  // rad/us

  // Subsystem dimensions in fixed order: electron 1, electron 2, nuclei.
  std::vector<int> dims() const;
  int hilbert_dim() const;

  // Throws std::invalid_argument when k <= 0, B < 0, a nuclear spin is not a
  // positive half-integer, an electron index is not 1 or 2, gamma < 0, or the
  // Hilbert dimension exceeds 32.
  void validate() const;
};

// H = omega_B n(theta,phi) . (S1 + S2) + sum_j S_e(j) . T_j . I_j, Hermitian,
// in rad/us, over the full product space.
Matrix build_hamiltonian(const RadicalPairModel& model, const FieldDirection& dir);

// rho_0 = |S><S| (x) Id/d on each nucleus: electronic singlet, nuclear spins
// at (infinite-temperature) thermal equilibrium.
Matrix initial_state(const RadicalPairModel& model);

// P_S = |S><S| (x) Id_nuclear.
Matrix singlet_projector(const RadicalPairModel& model);

// The two electron pure-dephasing Lindblad operators
//   L1 = sqrt(gamma/(1+d^2)) (sz1 + d sz2),
//   L2 = sqrt(gamma/(1+d^2)) (d sz1 + sz2),
// with sz the Pauli z (twice the spin operator), embedded in the full space.
// These carry an overall 1/4 dissipator prefactor applied in build_liouvillian.
std::vector<Matrix> dephasing_operators(const DephasingSpec& spec,
                                        const std::vector<int>& dims);

}  // namespace chemcompass
