#pragma once

// Brute-force reference implementations used by the tests. They deliberately
// avoid the library's own code paths (Kronecker products instead of bit
// masks, Pade exponentials instead of eigendecompositions).

#include <cmath>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline CMatrix pauli2(char c) {
  CMatrix m(2, 2);
  const Complex i{0.0, 1.0};
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("bad letter");
  }
  return m;
}

inline CMatrix kron_string(const std::string& letters) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (char c : letters) {
    CMatrix next = Eigen::kroneckerProduct(out, pauli2(c)).eval();
    out = next;
  }
  return out;
}

// exp(-i theta H) by scaling and squaring.
inline CMatrix expm_h(const CMatrix& h, double theta) {
  const CMatrix a = (Complex{0.0, -theta} * h).eval();
  return a.exp();
}

inline CVector random_ket(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector v(dim);
  for (int k = 0; k < dim; ++k) v(k) = {g(rng), g(rng)};
  return v.normalized();
}

// Random density matrix of the given rank (Ginibre construction).
inline CMatrix random_density(int dim, int rank, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix w(dim, rank);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < rank; ++c) w(r, c) = {g(rng), g(rng)};
  }
  CMatrix rho = w * w.adjoint();
  return rho / rho.trace();
}

inline CMatrix random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix z(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) z(r, c) = {g(rng), g(rng)};
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) q.col(k) *= r(k, k) / std::abs(r(k, k));
  return q;
}

inline CMatrix projector(const CVector& v) { return v * v.adjoint(); }

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
