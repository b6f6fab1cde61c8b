#pragma once

#include <functional>
#include <vector>

#include "vardyn/ansatz.hpp"
#include "vardyn/coefficients.hpp"
#include "vardyn/quantum_state.hpp"

namespace vardyn {

enum class Integrator { Euler, RK4 };

struct SolverConfig {
  double epsilon = 1e-6;   // Tikhonov weight
  double cutoff = 1e-10;   // singular values at or below this are dropped
  double dt = 1e-3;
  double t_max = 5.0;
  Integrator integrator = Integrator::Euler;

  void check() const;
};

struct SolveDiagnostics {
  double residual = 0.0;   // ||M lambda_dot - V||
  double v_norm = 0.0;     // ||V||
  double condition = 0.0;  // sigma_max / smallest kept sigma; +inf when rank 0
  Eigen::Index effective_rank = 0;
};

struct LambdaDot {
  RVector value;
  SolveDiagnostics diagnostics;
};

/// lambda_dot minimizing ||M x - V||^2 + eps^2 ||x||^2 over the span of the
/// singular directions above the cutoff.
LambdaDot solve_lambda_dot(const CoefficientSet& coeffs, const SolverConfig& cfg);

/// Forward Euler: lam + lam_dot * dt.
ParamVector step(const ParamVector& lam, const RVector& lam_dot, double dt);

struct StepRecord {
  SolveDiagnostics solve;
  double imag_residual = 0.0;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<ParamVector> params;
  std::vector<DensityMatrix> states;  // rho(lambda(t)) = U rho0 U^dagger
  std::vector<StepRecord> diagnostics;  // coefficients/solve at each stored time
};

/// Called after each stored time with the index just appended.
using StepObserver = std::function<void(const TrajectoryRecord&, std::size_t)>;

/// The hybrid loop: evaluate M and V at lambda(t_n), solve for lambda_dot,
/// step, repeat until t_max. Sampled runs draw per-step seeds from est.seed.
TrajectoryRecord run(const AnsatzCircuit& c, const ParamVector& lam0, const DensityMatrix& rho0, const PauliSum& h,
                     const SolverConfig& cfg, const EstimatorConfig& est, const StepObserver& observer = {});

/// Number of steps on the fixed grid 0, dt, ..., t_max (last step may be short).
std::size_t step_count(double t_max, double dt);

}  // namespace vardyn
