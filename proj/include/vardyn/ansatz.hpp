#pragma once

#include <vector>

#include "vardyn/linalg.hpp"
#include "vardyn/pauli.hpp"
#include "vardyn/quantum_state.hpp"

namespace vardyn {

/// One single-parameter gate exp(-i * sign * lambda * generator).
struct Gate {
  PauliSum generator;
  int sign = +1;
};

/// Parameter values of an ansatz, one per gate (radians).
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(RVector values) : values_(std::move(values)) {}
  ParamVector(std::initializer_list<double> values);

  Eigen::Index size() const noexcept { return values_.size(); }
  double operator[](Eigen::Index k) const { return values_(k); }
  const RVector& values() const noexcept { return values_; }

  friend bool operator==(const ParamVector& a, const ParamVector& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }

 private:
  RVector values_;
};

/// U(lambda) = G_0(lambda_0) G_1(lambda_1) ... G_{N-1}(lambda_{N-1}).
///
/// The first listed gate is the leftmost factor, so it is the last one to act
/// on a ket. Generators are diagonalized once at construction.
class AnsatzCircuit {
 public:
  explicit AnsatzCircuit(std::vector<Gate> gates);

  int n_qubits() const noexcept { return n_qubits_; }
  Eigen::Index n_params() const noexcept { return static_cast<Eigen::Index>(gates_.size()); }
  Eigen::Index dim() const noexcept { return Eigen::Index{1} << n_qubits_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }

  /// exp(-i sign_k lambda Lambda_k).
  CMatrix gate_unitary(Eigen::Index k, double lambda) const;
  /// -i sign_k Lambda_k as a dense matrix (the derivative insertion).
  const CMatrix& insertion(Eigen::Index k) const { return insertions_.at(static_cast<std::size_t>(k)); }

 private:
  int n_qubits_;
  std::vector<Gate> gates_;
  std::vector<HermitianExponential> exponentials_;
  std::vector<CMatrix> insertions_;
};

CMatrix unitary(const AnsatzCircuit& c, const ParamVector& lam);

/// U rho0 U^dagger.
DensityMatrix apply(const AnsatzCircuit& c, const ParamVector& lam, const DensityMatrix& rho0);

/// dU/dlambda_k, built by inserting -i sign_k Lambda_k in front of gate k.
CMatrix derivative(const AnsatzCircuit& c, const ParamVector& lam, Eigen::Index k);

/// d^2 U^dagger / dlambda_k dlambda_i, the adjoint of the double insertion
/// into U (for k == i the insertion is (-i sign Lambda_k)^2).
CMatrix second_derivative_dagger(const AnsatzCircuit& c, const ParamVector& lam, Eigen::Index k,
                                 Eigen::Index i);

/// Everything the coefficient engine needs at one parameter point, computed
/// from shared prefix/suffix products.
struct AnsatzJet {
  CMatrix u;                        // U
  std::vector<CMatrix> first;       // dU/dlambda_k
  std::vector<CMatrix> second_dag;  // d^2 U^dagger / dlambda_k dlambda_i, row-major k*N + i
};

AnsatzJet ansatz_jet(const AnsatzCircuit& c, const ParamVector& lam);

}  // namespace vardyn
