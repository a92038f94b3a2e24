#include "chemcompass/model.hpp"

#include <cmath>
#include <stdexcept>

namespace chemcompass {

HyperfineTensor HyperfineTensor::axial(double a, int electron) {
  HyperfineTensor out;
  out.t(2, 2) = a;
  out.electron = electron;
  return out;
}

HyperfineTensor HyperfineTensor::diagonal(double tx, double ty, double tz, int electron) {
  HyperfineTensor out;
  out.t(0, 0) = tx;
  out.t(1, 1) = ty;
  out.t(2, 2) = tz;
  out.electron = electron;
  return out;
}

std::vector<int> RadicalPairModel::dims() const {
  std::vector<int> out{2, 2};
  for (const auto& n : nuclei)
    out.push_back(static_cast<int>(std::lround(2 * n.spin)) + 1);
  return out;
}

int RadicalPairModel::hilbert_dim() const {
  int d = 1;
  for (int x : dims()) d *= x;
  return d;
}

void RadicalPairModel::validate() const {
  if (!(k > 0)) throw std::invalid_argument("model: recombination rate k must be > 0");
  if (!(b_field_ut >= 0)) throw std::invalid_argument("model: field magnitude must be >= 0");
  if (!(dephasing.gamma >= 0)) throw std::invalid_argument("model: dephasing rate must be >= 0");
  for (const auto& n : nuclei) {
    double two_s = 2 * n.spin;
    if (!(n.spin > 0) || std::abs(two_s - std::round(two_s)) > 1e-12)
      throw std::invalid_argument("model: nuclear spin must be a positive half-integer");
    if (n.hyperfine.electron != 1 && n.hyperfine.electron != 2)
      throw std::invalid_argument("model: hyperfine electron index must be 1 or 2");
    if (!n.hyperfine.t.allFinite())
      throw std::invalid_argument("model: hyperfine tensor entries must be finite");
  }
  if (hilbert_dim() > 32)
    throw std::invalid_argument("model: Hilbert dimension above the dense-solver target of 32");
}

namespace {

// Spin operator triple for factor `site`, embedded in the full space.
std::array<Matrix, 3> embedded_spin(double s, std::size_t site, const std::vector<int>& dims) {
  SpinOperators ops = spin_operators(s);
  return {embed(ops.sx, site, dims), embed(ops.sy, site, dims), embed(ops.sz, site, dims)};
}

}  // namespace

Matrix build_hamiltonian(const RadicalPairModel& model, const FieldDirection& dir) {
  model.validate();
  const auto dims = model.dims();
  const int n = model.hilbert_dim();

  auto s1 = embedded_spin(0.5, 0, dims);
  auto s2 = embedded_spin(0.5, 1, dims);

  const double wb = model.omega_b();
  const Eigen::Vector3d nvec(std::sin(dir.theta) * std::cos(dir.phi),
                             std::sin(dir.theta) * std::sin(dir.phi),
                             std::cos(dir.theta));
  Matrix h = Matrix::Zero(n, n);
  for (int al = 0; al < 3; ++al)
    if (nvec[al] != 0.0) h += wb * nvec[al] * (s1[al] + s2[al]);

  for (std::size_t j = 0; j < model.nuclei.size(); ++j) {
    const auto& nuc = model.nuclei[j];
    const auto& se = (nuc.hyperfine.electron == 1) ? s1 : s2;
    auto ij = embedded_spin(nuc.spin, 2 + j, dims);
    for (int al = 0; al < 3; ++al)
      for (int be = 0; be < 3; ++be)
        if (nuc.hyperfine.t(al, be) != 0.0)
          h += nuc.hyperfine.t(al, be) * se[al] * ij[be];
  }
  return h;
}

namespace {

// Electronic singlet |S> = (|ud> - |du>)/sqrt(2) as a 4-vector in the
// descending-m product basis |uu>, |ud>, |du>, |dd>.
Vector singlet_ket_electronic() {
  Vector s = Vector::Zero(4);
  s(1) = 1.0 / std::sqrt(2.0);
  s(2) = -1.0 / std::sqrt(2.0);
  return s;
}

}  // namespace

Matrix initial_state(const RadicalPairModel& model) {
  model.validate();
  Vector s = singlet_ket_electronic();
  Matrix rho = s * s.adjoint();
  for (const auto& nuc : model.nuclei) {
    int d = static_cast<int>(std::lround(2 * nuc.spin)) + 1;
    rho = kron(rho, Matrix::Identity(d, d) / double(d));
  }
  return rho;
}

Matrix singlet_projector(const RadicalPairModel& model) {
  model.validate();
  Vector s = singlet_ket_electronic();
  Matrix p = s * s.adjoint();
  for (const auto& nuc : model.nuclei) {
    int d = static_cast<int>(std::lround(2 * nuc.spin)) + 1;
    p = kron(p, Matrix::Identity(d, d));
  }
  return p;
}

std::vector<Matrix> dephasing_operators(const DephasingSpec& spec,
                                        const std::vector<int>& dims) {
  if (!(spec.gamma >= 0))
    throw std::invalid_argument("dephasing_operators: gamma must be >= 0");
  SpinOperators half = spin_operators(0.5);
  Matrix sz1 = embed(2.0 * half.sz, 0, dims);  // Pauli z = 2 Sz
  Matrix sz2 = embed(2.0 * half.sz, 1, dims);
  const double c = std::sqrt(spec.gamma / (1.0 + spec.d * spec.d));
  return {c * (sz1 + spec.d * sz2), c * (spec.d * sz1 + sz2)};
}

}  // namespace chemcompass
