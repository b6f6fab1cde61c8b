#pragma once

#include <functional>
#include <vector>

#include "vardyn/ensemble.hpp"
#include "vardyn/linalg.hpp"
#include "vardyn/pauli.hpp"
#include "vardyn/quantum_state.hpp"

namespace vardyn {

/// Pure-dephasing generator with coefficients from a disorder distribution:
///   d rho / dt = -i eta(t) [A, rho] + xi(t) (A rho A - (1/2){A^2, rho}).
///
/// With H_alpha = (alpha/2) A and A a Pauli string this reproduces the
/// ensemble average for the same distribution.
class DephasingModel {
 public:
  DephasingModel(PauliSum a, DisorderDistribution source, DerivativeMode mode = DerivativeMode::Analytic);

  const PauliSum& op() const noexcept { return a_; }
  const DisorderDistribution& source() const noexcept { return source_; }
  int n_qubits() const noexcept { return a_.n_qubits(); }

  CMatrix rhs(const CMatrix& rho, double t) const;
  CMatrix rhs(const CMatrix& rho, const DephasingCoefficients& c) const;
  DephasingCoefficients coefficients(double t) const;

 private:
  PauliSum a_;
  DisorderDistribution source_;
  DerivativeMode mode_;
  CMatrix dense_a_;
  CMatrix dense_a2_;
};

struct Propagation {
  std::vector<double> times;
  std::vector<DensityMatrix> states;

  const DensityMatrix& final_state() const { return states.back(); }
};

/// Fixed-step classical RK4 from t = 0 to t_max. The grid is k * dt with a
/// shorter last step when dt does not divide t_max. Every state is validated;
/// a failure becomes an Integration error naming the step.
Propagation propagate(const DephasingModel& model, const DensityMatrix& rho0, double t_max, double dt = 1e-3);

}  // namespace vardyn
