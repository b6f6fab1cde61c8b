#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vardyn/ansatz.hpp"
#include "vardyn/linalg.hpp"
#include "vardyn/pauli.hpp"
#include "vardyn/quantum_state.hpp"

namespace vardyn {

enum class EstimatorMode { Exact, Sampled };

struct EstimatorConfig {
  EstimatorMode mode = EstimatorMode::Exact;
  std::uint64_t shots = 10000;
  std::uint64_t seed = 0;
};

/// Imaginary residues above this raise a Consistency error.
inline constexpr double kImagResidualLimit = 1e-8;

/// M lambda_dot = V. Entries are real by construction; `imag_residual` records
/// the largest imaginary part discarded on the way.
struct CoefficientSet {
  RMatrix m;
  RVector v;
  EstimatorMode mode = EstimatorMode::Exact;
  double imag_residual = 0.0;
  std::optional<RMatrix> m_stderr;
  std::optional<RVector> v_stderr;
};

/// L = i Tr[U rho0 dU^dagger/dt] - Tr[U rho0 U^dagger H] with
/// dU^dagger/dt = sum_i dU^dagger/dlambda_i * lambda_dot_i. Returned verbatim.
Complex lagrangian(const AnsatzCircuit& c, const ParamVector& lam, const RVector& lam_dot,
                   const DensityMatrix& rho0, const PauliSum& h);

/// Dense evaluation of
///   M_ki = i Tr[dU_k rho0 dU_i^dagger + U rho0 d2U^dagger_ki] + c.c.
///   V_k  = Tr[dU_k rho0 U^dagger H + h.c.]
CoefficientSet exact_coefficients(const AnsatzCircuit& c, const ParamVector& lam, const DensityMatrix& rho0,
                                  const PauliSum& h);

// ---------------------------------------------------------------------------
// Ancilla (Hadamard-test) estimation.

enum class TracePart { Real, Imaginary };

/// Pauli applied to the system register, controlled by the ancilla.
/// branch 1: acts when the ancilla is |1>; branch 0: acts when it is |0>.
struct ControlledInsertion {
  std::size_t slot;  // placed immediately left of layers[slot]; slot == layers.size() is rightmost
  PauliString pauli;
  int branch = 1;
};

/// layers are in operator-product order: layers[0] is leftmost (acts last).
/// With A the product along branch 1 and B along branch 0, the ancilla
/// measurement estimates Re or Im of Tr[A rho B^dagger]. Insertions sharing
/// a slot are ordered left to right as listed.
struct HadamardCircuit {
  std::vector<CMatrix> layers;
  std::vector<ControlledInsertion> insertions;
};

struct TraceEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double probability_zero = 0.0;  // exact ancilla P(0)
};

TraceEstimate hadamard_test(const DensityMatrix& rho_in, const HadamardCircuit& circuit, TracePart part,
                            const EstimatorConfig& cfg);

/// Expands every trace of M and V into Pauli-inserted ancilla circuits and
/// recombines the estimates with the generator and Hamiltonian weights. In
/// Exact mode the ancilla statistics are used without sampling.
CoefficientSet sampled_coefficients(const AnsatzCircuit& c, const ParamVector& lam, const DensityMatrix& rho0,
                                    const PauliSum& h, const EstimatorConfig& cfg);

/// Deterministic sub-seed for one estimation task.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

}  // namespace vardyn
