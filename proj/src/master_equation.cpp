#include "vardyn/master_equation.hpp"

#include <cmath>

#include <fmt/format.h>

#include "vardyn/error.hpp"
#include "vardyn/evolution.hpp"

namespace vardyn {

DephasingModel::DephasingModel(PauliSum a, DisorderDistribution source, DerivativeMode mode)
    : a_(std::move(a)), source_(std::move(source)), mode_(mode) {
  if (a_.n_qubits() <= 0) throw Error(ErrorKind::Parameter, "dephasing operator has no register");
  dense_a_ = dense(a_);
  dense_a2_ = dense_a_ * dense_a_;
}

DephasingCoefficients DephasingModel::coefficients(double t) const { return master_coefficients(source_, t, mode_); }

CMatrix DephasingModel::rhs(const CMatrix& rho, const DephasingCoefficients& c) const {
  if (rho.rows() != dense_a_.rows() || rho.cols() != dense_a_.cols()) {
    throw Error(ErrorKind::Dimension,
                fmt::format("state is {}x{}, dephasing operator is {}x{}", rho.rows(), rho.cols(), dense_a_.rows(),
                            dense_a_.cols()));
  }
  const CMatrix a_rho = dense_a_ * rho;
  const CMatrix rho_a = rho * dense_a_;
  CMatrix out = Complex{0.0, -c.eta} * (a_rho - rho_a);
  out += c.xi * (a_rho * dense_a_ - 0.5 * (dense_a2_ * rho + rho * dense_a2_));
  return out;
}

CMatrix DephasingModel::rhs(const CMatrix& rho, double t) const { return rhs(rho, coefficients(t)); }

Propagation propagate(const DephasingModel& model, const DensityMatrix& rho0, double t_max, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::Parameter, "dt must be > 0");
  if (!(t_max >= 0.0)) throw Error(ErrorKind::Parameter, "t_max must be >= 0");
  if (rho0.n_qubits() != model.n_qubits()) throw Error(ErrorKind::Dimension, "state does not match dephasing operator");
  rho0.require_valid("initial state");

  const std::size_t n_steps = step_count(t_max, dt);
  Propagation out;
  out.times.reserve(n_steps + 1);
  out.states.reserve(n_steps + 1);
  out.times.push_back(0.0);
  out.states.push_back(rho0);

  CMatrix rho = rho0.matrix();
  double t = 0.0;
  for (std::size_t n = 0; n < n_steps; ++n) {
    const bool last = n + 1 == n_steps;
    const double h = last ? t_max - t : dt;
    try {
      const CMatrix k1 = model.rhs(rho, t);
      const CMatrix k2 = model.rhs(rho + 0.5 * h * k1, t + 0.5 * h);
      const CMatrix k3 = model.rhs(rho + 0.5 * h * k2, t + 0.5 * h);
      const CMatrix k4 = model.rhs(rho + h * k3, t + h);
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t = last ? t_max : static_cast<double>(n + 1) * dt;
      DensityMatrix state(rho);
      const ValidationReport report = validate(state);
      if (!report.ok()) {
        throw Error(ErrorKind::Integration,
                    fmt::format("state left the physical set (hermiticity {:.3g}, trace {:.3g}, min eigenvalue {:.3g})",
                                report.hermiticity_residual, report.trace_residual, report.min_eigenvalue));
      }
      out.times.push_back(t);
      out.states.push_back(std::move(state));
    } catch (const Error& e) {
      const Error ctx = e.with_context(fmt::format("master equation step {}", n + 1));
      if (e.kind() == ErrorKind::Integration) throw ctx;
      throw Error(ErrorKind::Integration, ctx.what());
    }
  }
  return out;
}

}  // namespace vardyn
