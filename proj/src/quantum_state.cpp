#include "vardyn/quantum_state.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>
#include <Eigen/Eigenvalues>

#include "vardyn/error.hpp"
#include "vardyn/pauli.hpp"

namespace vardyn {

namespace {

int qubits_for_dimension(Eigen::Index dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw Error(ErrorKind::Dimension, fmt::format("dimension {} is not a power of two >= 2", dim));
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if (n > kDefaultMaxQubits) {
    throw Error(ErrorKind::Capacity, fmt::format("{} qubits exceeds the maximum of {}", n, kDefaultMaxQubits));
  }
  return n;
}

}  // namespace

PureState::PureState(CVector amplitudes, Normalization mode)
    : n_qubits_(qubits_for_dimension(amplitudes.size())), amplitudes_(std::move(amplitudes)) {
  const double norm = amplitudes_.norm();
  if (mode == Normalization::Renormalize) {
    if (!(norm > 0.0) || !std::isfinite(norm)) throw Error(ErrorKind::Validation, "cannot renormalize a zero vector");
    amplitudes_ /= norm;
  } else if (std::abs(norm - 1.0) > kNormTolerance) {
    throw Error(ErrorKind::Validation,
                fmt::format("state vector has norm {:.12g}; pass Normalization::Renormalize to rescale", norm));
  }
}

PureState PureState::basis(int n_qubits, std::size_t index) {
  const auto dim = Eigen::Index{1} << n_qubits;
  if (static_cast<Eigen::Index>(index) >= dim) throw Error(ErrorKind::Parameter, "basis index out of range");
  CVector v = CVector::Zero(dim);
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v));
}

PureState PureState::plus(int n_qubits) {
  const auto dim = Eigen::Index{1} << n_qubits;
  return PureState(CVector::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim))));
}

PureState PureState::phi0() {
  CVector v(4);
  v << 0.5, 0.5, 0.5, -0.5;
  return PureState(std::move(v));
}

DensityMatrix::DensityMatrix(CMatrix matrix) : n_qubits_(0), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw Error(ErrorKind::Dimension, "density matrix must be square");
  n_qubits_ = qubits_for_dimension(matrix_.rows());
}

const DensityMatrix& DensityMatrix::require_valid(std::string_view what) const {
  const ValidationReport r = validate(*this);
  if (!r.ok()) {
    throw Error(ErrorKind::Validation,
                fmt::format("{} failed validation (hermiticity {:.3g}, trace {:.3g}, min eigenvalue {:.3g})",
                            what, r.hermiticity_residual, r.trace_residual, r.min_eigenvalue));
  }
  return *this;
}

DensityMatrix from_pure(const PureState& s) {
  const CVector& a = s.amplitudes();
  return DensityMatrix(a * a.adjoint());
}

ValidationReport validate(const DensityMatrix& rho) {
  const CMatrix& m = rho.matrix();
  ValidationReport r;
  r.hermiticity_residual = hermiticity_residual(m);
  r.trace_residual = std::abs(m.trace() - Complex{1.0, 0.0});
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = solver.eigenvalues().minCoeff();
  return r;
}

double purity(const DensityMatrix& rho) {
  // Tr[rho^2] = sum_ij rho_ij rho_ji = sum |rho_ij|^2 for Hermitian rho.
  const CMatrix& m = rho.matrix();
  return (m.cwiseProduct(m.transpose())).sum().real();
}

PureState preset_state(std::string_view name, int n_qubits) {
  if (name == "zero") return PureState::basis(n_qubits, 0);
  if (name == "plus") return PureState::plus(n_qubits);
  if (name == "plus_plus") {
    if (n_qubits != 2) throw Error(ErrorKind::Dimension, "preset 'plus_plus' is a two-qubit state");
    return PureState::plus(2);
  }
  if (name == "phi0") {
    if (n_qubits != 2) throw Error(ErrorKind::Dimension, "preset 'phi0' is a two-qubit state");
    return PureState::phi0();
  }
  throw Error(ErrorKind::Parameter, "unknown state preset '" + std::string(name) + "'");
}

}  // namespace vardyn
