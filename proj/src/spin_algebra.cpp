#include "chemcompass/spin_algebra.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace chemcompass {

SpinOperators spin_operators(double s) {
  double two_s = 2.0 * s;
  if (!(s > 0) || std::abs(two_s - std::round(two_s)) > 1e-12)
    throw std::invalid_argument("spin_operators: s must be a positive half-integer");
  int dim = static_cast<int>(std::lround(two_s)) + 1;

  SpinOperators ops{s, Matrix::Zero(dim, dim), Matrix::Zero(dim, dim),
                    Matrix::Zero(dim, dim)};
  // Basis index i holds m = s - i (descending). Ladder element
  // <m+1| S+ |m> = sqrt(s(s+1) - m(m+1)) sits one row above the diagonal.
  for (int i = 0; i < dim; ++i) ops.sz(i, i) = s - i;
  for (int i = 1; i < dim; ++i) {
    double m = s - i;  // the state S+ acts on
    double c = std::sqrt(s * (s + 1) - m * (m + 1));
    ops.sx(i - 1, i) += 0.5 * c;            // (S+ + S-)/2
    ops.sx(i, i - 1) += 0.5 * c;
    ops.sy(i - 1, i) += Complex(0, -0.5) * c;  // (S+ - S-)/2i
    ops.sy(i, i - 1) += Complex(0, 0.5) * c;
  }
  return ops;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix embed(const Matrix& op, std::size_t site, const std::vector<int>& dims) {
  if (site >= dims.size()) throw std::invalid_argument("embed: site out of range");
  if (op.rows() != dims[site] || op.cols() != dims[site])
    throw std::invalid_argument("embed: operator dimension does not match dims[site]");
  Matrix out = Matrix::Identity(1, 1);
  for (std::size_t j = 0; j < dims.size(); ++j) {
    if (j == site)
      out = kron(out, op);
    else
      out = kron(out, Matrix::Identity(dims[j], dims[j]));
  }
  return out;
}

double hermiticity_error(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianEig hermitian_eig(const Matrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("hermitian_eig: matrix not square");
  if (hermiticity_error(m) > 1e-10)
    throw std::invalid_argument("hermitian_eig: input not Hermitian within 1e-10");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
  return HermitianEig{solver.eigenvalues(), solver.eigenvectors()};
}

Vector solve_linear(const Matrix& a, const Vector& b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw std::invalid_argument("solve_linear: dimension mismatch");
  Eigen::PartialPivLU<Matrix> lu(a);
  Vector x = lu.solve(b);
  double bnorm = b.norm();
  double resid = (a * x - b).norm();
  if (!(resid <= 1e-8 * std::max(bnorm, 1.0))) {
    std::ostringstream msg;
    msg << "solve_linear: residual " << resid << " for |b| = " << bnorm
        << "; reciprocal condition estimate " << lu.rcond()
        << " (matrix near-singular)";
    throw std::runtime_error(msg.str());
  }
  return x;
}

}  // namespace chemcompass
