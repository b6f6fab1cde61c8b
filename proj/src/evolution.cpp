#include "vardyn/evolution.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <Eigen/SVD>

#include "vardyn/error.hpp"

namespace vardyn {

void SolverConfig::check() const {
  if (!(epsilon >= 0.0)) throw Error(ErrorKind::Config, "epsilon must be >= 0");
  if (!(cutoff >= 0.0)) throw Error(ErrorKind::Config, "cutoff must be >= 0");
  if (!(dt > 0.0)) throw Error(ErrorKind::Config, "dt must be > 0");
  if (!(t_max > 0.0)) throw Error(ErrorKind::Config, "t_max must be > 0");
  if (dt > t_max) throw Error(ErrorKind::Config, "dt must not exceed t_max");
}

std::size_t step_count(double t_max, double dt) {
  if (t_max <= 0.0) return 0;
  // Tolerate grids like 5 / 1e-3 that are integral up to round-off.
  const double ratio = t_max / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(ratio));
}

LambdaDot solve_lambda_dot(const CoefficientSet& coeffs, const SolverConfig& cfg) {
  const RMatrix& m = coeffs.m;
  const RVector& v = coeffs.v;
  if (m.rows() != m.cols() || m.rows() != v.size()) {
    throw Error(ErrorKind::Dimension, fmt::format("M is {}x{} but V has {} entries", m.rows(), m.cols(), v.size()));
  }
  if (!m.allFinite() || !v.allFinite()) throw Error(ErrorKind::Numeric, "non-finite entries in M or V");

  Eigen::JacobiSVD<RMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector& sigma = svd.singularValues();
  const RVector projected = svd.matrixU().transpose() * v;
  const double eps2 = cfg.epsilon * cfg.epsilon;

  RVector coords = RVector::Zero(sigma.size());
  Eigen::Index rank = 0;
  double smallest_kept = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) <= cfg.cutoff) continue;
    ++rank;
    smallest_kept = std::min(smallest_kept, sigma(k));
    coords(k) = sigma(k) / (sigma(k) * sigma(k) + eps2) * projected(k);
  }

  LambdaDot out;
  out.value = svd.matrixV() * coords;
  out.diagnostics.effective_rank = rank;
  out.diagnostics.residual = (m * out.value - v).norm();
  out.diagnostics.v_norm = v.norm();
  out.diagnostics.condition =
      rank == 0 ? std::numeric_limits<double>::infinity() : sigma(0) / smallest_kept;
  if (!out.value.allFinite()) throw Error(ErrorKind::Numeric, "non-finite lambda_dot");
  return out;
}

ParamVector step(const ParamVector& lam, const RVector& lam_dot, double dt) {
  if (lam_dot.size() != lam.size()) throw Error(ErrorKind::Dimension, "lambda_dot length mismatch");
  return ParamVector(lam.values() + lam_dot * dt);
}

namespace {

CoefficientSet coefficients_at(const AnsatzCircuit& c, const ParamVector& lam, const DensityMatrix& rho0,
                               const PauliSum& h, const EstimatorConfig& est, std::uint64_t step_index,
                               std::uint64_t stage) {
  if (est.mode == EstimatorMode::Exact) return exact_coefficients(c, lam, rho0, h);
  EstimatorConfig sub = est;
  sub.seed = derive_seed(est.seed, {step_index, stage});
  return sampled_coefficients(c, lam, rho0, h, sub);
}

}  // namespace

TrajectoryRecord run(const AnsatzCircuit& c, const ParamVector& lam0, const DensityMatrix& rho0, const PauliSum& h,
                     const SolverConfig& cfg, const EstimatorConfig& est, const StepObserver& observer) {
  cfg.check();
  if (lam0.size() != c.n_params()) {
    throw Error(ErrorKind::Parameter, fmt::format("ansatz has {} parameters, got {}", c.n_params(), lam0.size()));
  }
  if (rho0.n_qubits() != c.n_qubits()) throw Error(ErrorKind::Dimension, "initial state does not match the ansatz");
  rho0.require_valid("initial state");

  const std::size_t n_steps = step_count(cfg.t_max, cfg.dt);
  TrajectoryRecord rec;
  rec.times.reserve(n_steps + 1);
  rec.params.reserve(n_steps + 1);
  rec.states.reserve(n_steps + 1);
  rec.diagnostics.reserve(n_steps + 1);

  ParamVector lam = lam0;
  double t = 0.0;
  for (std::size_t n = 0; n <= n_steps; ++n) {
    try {
      const CoefficientSet coeffs = coefficients_at(c, lam, rho0, h, est, n, 0);
      const LambdaDot sol = solve_lambda_dot(coeffs, cfg);

      DensityMatrix state = apply(c, lam, rho0);
      state.require_valid("variational state");
      rec.times.push_back(t);
      rec.params.push_back(lam);
      rec.states.push_back(std::move(state));
      rec.diagnostics.push_back({sol.diagnostics, coeffs.imag_residual});
      if (observer) observer(rec, rec.times.size() - 1);
      if (n == n_steps) break;

      const double h_step = (n + 1 == n_steps) ? cfg.t_max - t : cfg.dt;
      if (cfg.integrator == Integrator::Euler) {
        lam = step(lam, sol.value, h_step);
      } else {
        auto slope = [&](const ParamVector& p, std::uint64_t stage) {
          return solve_lambda_dot(coefficients_at(c, p, rho0, h, est, n, stage), cfg).value;
        };
        const RVector& k1 = sol.value;
        const RVector k2 = slope(step(lam, k1, 0.5 * h_step), 1);
        const RVector k3 = slope(step(lam, k2, 0.5 * h_step), 2);
        const RVector k4 = slope(step(lam, k3, h_step), 3);
        lam = step(lam, (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0, h_step);
      }
      t = (n + 1 == n_steps) ? cfg.t_max : static_cast<double>(n + 1) * cfg.dt;
    } catch (const Error& e) {
      throw e.with_context(fmt::format("step {}", n));
    }
  }
  return rec;
}

}  // namespace vardyn
