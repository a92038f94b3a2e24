#pragma once

// Dense complex linear algebra and spin-operator construction. Everything here
// is a pure function on immutable inputs; the largest Hilbert space we target
// is dim <= 32 (two electrons plus up to three spin-1/2 nuclei), so dense
// O(n^3) routines are the right tool.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace chemcompass {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Angular-momentum matrices for spin s in the Sz eigenbasis, m descending
// (m = s, s-1, ..., -s). Throws std::invalid_argument unless 2s is a
// positive integer.
struct SpinOperators {
  double s;
  Matrix sx, sy, sz;
};
SpinOperators spin_operators(double s);

// Kronecker product, row-of-a-major: (a (x) b)[i*rb + k, j*cb + l] = a(i,j) b(k,l).
Matrix kron(const Matrix& a, const Matrix& b);

// Operator acting on factor `site` of a tensor-product space, identity on all
// other factors. Factor order is fixed: electron 1, electron 2, nuclei in
// declaration order.
Matrix embed(const Matrix& op, std::size_t site, const std::vector<int>& dims);

// max_ij |M - M^dagger|
double hermiticity_error(const Matrix& m);

// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
// Input must be Hermitian within 1e-10 (absolute, entrywise).
struct HermitianEig {
  Eigen::VectorXd values;
  Matrix vectors;  // columns are eigenvectors
};
HermitianEig hermitian_eig(const Matrix& m);

// Dense LU solve of A x = b. Throws std::runtime_error with a condition
// diagnostic when the solution does not reproduce b to working precision.
Vector solve_linear(const Matrix& a, const Vector& b);

}  // namespace chemcompass
