#pragma once

#include <string_view>
#include <vector>

#include "vardyn/linalg.hpp"

namespace vardyn {

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kHermiticityTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kPsdTolerance = 1e-9;

enum class Normalization { Require, Renormalize };

/// Normalized state vector on n qubits (qubit 0 most significant).
class PureState {
 public:
  PureState(CVector amplitudes, Normalization mode = Normalization::Require);

  static PureState basis(int n_qubits, std::size_t index);
  /// |+>^(x)n.
  static PureState plus(int n_qubits);
  /// (|0>|+> + |1>|->)/sqrt(2), i.e. amplitudes (1/2, 1/2, 1/2, -1/2).
  static PureState phi0();

  int n_qubits() const noexcept { return n_qubits_; }
  const CVector& amplitudes() const noexcept { return amplitudes_; }

 private:
  int n_qubits_;
  CVector amplitudes_;
};

struct ValidationReport {
  double hermiticity_residual = 0.0;  // max |rho - rho^dagger|
  double trace_residual = 0.0;        // |Tr rho - 1|
  double min_eigenvalue = 0.0;

  bool ok() const noexcept {
    return hermiticity_residual <= kHermiticityTolerance && trace_residual <= kTraceTolerance &&
           min_eigenvalue >= -kPsdTolerance;
  }
};

/// A 2^n x 2^n complex matrix meant to be a density matrix. Construction only
/// checks the shape; `validate` reports how far it is from a physical state.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix matrix);

  int n_qubits() const noexcept { return n_qubits_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }
  const CMatrix& matrix() const noexcept { return matrix_; }

  /// Throws Validation with the report in the message unless ok().
  const DensityMatrix& require_valid(std::string_view what = "density matrix") const;

 private:
  int n_qubits_;
  CMatrix matrix_;
};

DensityMatrix from_pure(const PureState& s);
ValidationReport validate(const DensityMatrix& rho);
/// Tr[rho^2].
double purity(const DensityMatrix& rho);

/// Named presets "zero", "plus", "plus_plus", "phi0" on `n_qubits` qubits.
PureState preset_state(std::string_view name, int n_qubits);

}  // namespace vardyn
