#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vardyn/linalg.hpp"
#include "vardyn/pauli.hpp"
#include "vardyn/quadrature.hpp"
#include "vardyn/quantum_state.hpp"

namespace vardyn {

enum class DistributionKind { Gaussian, CauchyLorentz, Discrete };

struct DiscretePoint {
  double probability;
  double alpha;
};

/// Distribution of the disorder parameter alpha.
///
/// Gaussian: gamma is the variance. Cauchy-Lorentz: gamma is the half-width.
/// Discrete: explicit (p, alpha) points with sum p = 1.
class DisorderDistribution {
 public:
  static DisorderDistribution gaussian(double alpha0, double variance);
  static DisorderDistribution cauchy(double alpha0, double half_width);
  static DisorderDistribution discrete(std::vector<DiscretePoint> points);
  /// Point mass at alpha0.
  static DisorderDistribution delta(double alpha0);

  DistributionKind kind() const noexcept { return kind_; }
  double alpha0() const noexcept { return alpha0_; }
  double gamma() const noexcept { return gamma_; }
  const std::vector<DiscretePoint>& points() const noexcept { return points_; }

  /// Density for continuous kinds; Parameter error for Discrete.
  double pdf(double alpha) const;
  /// Mean for Gaussian / Discrete, the center for Cauchy-Lorentz (no mean).
  double location() const;
  /// Distribution of factor * alpha.
  DisorderDistribution scaled(double factor) const;
  std::string describe() const;

 private:
  DisorderDistribution(DistributionKind kind, double alpha0, double gamma, std::vector<DiscretePoint> points);

  DistributionKind kind_;
  double alpha0_;
  double gamma_;
  std::vector<DiscretePoint> points_;
};

/// Characteristic function E[exp(i alpha t)] in closed form.
Complex phi(const DisorderDistribution& d, double t);

/// d/dt ln phi(t). For Cauchy-Lorentz at t = 0 the right derivative is used.
Complex log_derivative(const DisorderDistribution& d, double t);

/// eta = (1/2) Im d/dt ln phi, xi = -(1/2) Re d/dt ln phi (hbar = 1).
struct DephasingCoefficients {
  double eta = 0.0;
  double xi = 0.0;
};

enum class DerivativeMode { Analytic, FiniteDifference };

/// Singularity error when |phi(t)| <= 1e-12 and the evaluation divides by phi
/// (discrete distributions, finite differences).
DephasingCoefficients master_coefficients(const DisorderDistribution& d, double t,
                                          DerivativeMode mode = DerivativeMode::Analytic);

inline constexpr double kPhiSingularity = 1e-12;
inline constexpr double kFiniteDifferenceStep = 1e-5;

/// Nodes/weights for E[f(alpha)], resolving oscillations up to omega_max.
/// Gaussian: Gauss-Hermite with 64 * 2^level nodes. Cauchy-Lorentz: graded
/// tangent rule. Discrete: the points themselves.
quadrature::Rule distribution_rule(const DisorderDistribution& d, double omega_max, int level = 0);

/// A small rule with about `count` nodes, for per-realization sweeps where
/// each node is expensive. Cauchy-Lorentz uses plain Gauss-Legendre in the
/// tangent variable, so its accuracy is modest.
quadrature::Rule coarse_rule(const DisorderDistribution& d, int count);

/// sum_k w_k exp(i alpha_k t) with `distribution_rule`.
Complex phi_quadrature(const DisorderDistribution& d, double t, int level = 0);

std::vector<double> sample_alphas(const DisorderDistribution& d, std::size_t count, std::uint64_t seed);

/// {p_alpha, H_alpha}. Generator form: H_alpha = alpha * G + B (B may be
/// empty). List form: explicit (p, H) pairs.
class HamiltonianEnsemble {
 public:
  static HamiltonianEnsemble generator_form(DisorderDistribution d, PauliSum generator, PauliSum base = {});
  static HamiltonianEnsemble explicit_list(std::vector<std::pair<double, PauliSum>> members);

  bool is_generator_form() const noexcept { return generator_form_; }
  int n_qubits() const noexcept { return n_qubits_; }
  const DisorderDistribution& distribution() const;
  const PauliSum& generator() const noexcept { return generator_; }
  const PauliSum& base() const noexcept { return base_; }
  /// [G, B] = 0, which enables the closed-form average.
  bool base_commutes() const noexcept { return commuting_; }
  const std::vector<std::pair<double, PauliSum>>& members() const noexcept { return members_; }

  PauliSum realization(double alpha) const;
  /// location * G + B, or sum_k p_k H_k.
  PauliSum mean_hamiltonian() const;
  /// Bound on the largest eigenvalue gap of G (zero for list form).
  double generator_spread() const noexcept;

  const RVector& generator_eigenvalues() const noexcept { return g_values_; }
  const CMatrix& generator_eigenvectors() const noexcept { return g_vectors_; }

 private:
  HamiltonianEnsemble() = default;

  bool generator_form_ = false;
  bool commuting_ = true;
  int n_qubits_ = 0;
  std::optional<DisorderDistribution> distribution_;
  PauliSum generator_;
  PauliSum base_;
  std::vector<std::pair<double, PauliSum>> members_;
  RVector g_values_;
  CMatrix g_vectors_;
};

/// rho_bar(t) = sum_alpha p_alpha e^{-i H_alpha t} rho0 e^{i H_alpha t}.
/// Generator form with [G, B] = 0 is evaluated in G's eigenbasis:
///   rho_bar_mn = rho0_mn * phi(-(g_m - g_n) t), then the base rotation.
/// A non-commuting base falls back to `ensemble_average_quadrature`.
DensityMatrix ensemble_average(const HamiltonianEnsemble& e, const DensityMatrix& rho0, double t);

struct QuadratureOptions {
  double tolerance = 1e-6;  // max-entry change between successive levels
  int max_level = 3;
};

/// Brute-force quadrature of the ensemble sum with dense exponentials per node,
/// refining until successive levels agree within the tolerance.
DensityMatrix ensemble_average_quadrature(const HamiltonianEnsemble& e, const DensityMatrix& rho0, double t,
                                          const QuadratureOptions& opts = {});

DensityMatrix ensemble_average_monte_carlo(const HamiltonianEnsemble& e, const DensityMatrix& rho0, double t,
                                           std::size_t samples, std::uint64_t seed);

}  // namespace vardyn
