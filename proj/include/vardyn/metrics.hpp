#pragma once

#include "vardyn/quantum_state.hpp"

namespace vardyn {

/// D = (1/2) sum |eig(rho - sigma)|.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2. If either argument
/// is pure to 1e-12 this is Tr[rho sigma].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Two-qubit concurrence max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)),
/// l_k the decreasing eigenvalues of rho (Y x Y) rho^* (Y x Y).
double concurrence(const DensityMatrix& rho);

struct MetricSample {
  double t = 0.0;
  double trace_distance = 0.0;
  double fidelity = 0.0;
  double concurrence_a = 0.0;  // variational state
  double concurrence_b = 0.0;  // reference state
};

/// Concurrences are NaN unless both states are on two qubits.
MetricSample compare(double t, const DensityMatrix& variational, const DensityMatrix& reference);

}  // namespace vardyn
