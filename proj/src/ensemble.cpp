#include "vardyn/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>
#include <Eigen/Eigenvalues>

#include "vardyn/error.hpp"

namespace vardyn {

DisorderDistribution::DisorderDistribution(DistributionKind kind, double alpha0, double gamma,
                                           std::vector<DiscretePoint> points)
    : kind_(kind), alpha0_(alpha0), gamma_(gamma), points_(std::move(points)) {}

DisorderDistribution DisorderDistribution::gaussian(double alpha0, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance) || !std::isfinite(alpha0)) {
    throw Error(ErrorKind::Parameter, "Gaussian disorder needs a finite center and variance > 0");
  }
  return {DistributionKind::Gaussian, alpha0, variance, {}};
}

DisorderDistribution DisorderDistribution::cauchy(double alpha0, double half_width) {
  if (!(half_width > 0.0) || !std::isfinite(half_width) || !std::isfinite(alpha0)) {
    throw Error(ErrorKind::Parameter, "Cauchy-Lorentz disorder needs a finite center and half-width > 0");
  }
  return {DistributionKind::CauchyLorentz, alpha0, half_width, {}};
}

DisorderDistribution DisorderDistribution::discrete(std::vector<DiscretePoint> points) {
  if (points.empty()) throw Error(ErrorKind::Parameter, "discrete disorder needs at least one point");
  double total = 0.0;
  for (const auto& p : points) {
    if (!(p.probability >= 0.0) || !std::isfinite(p.alpha)) {
      throw Error(ErrorKind::Parameter, "discrete disorder points need p >= 0 and finite alpha");
    }
    total += p.probability;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorKind::Parameter, fmt::format("discrete probabilities sum to {:.15g}, not 1", total));
  }
  double mean = 0.0;
  for (const auto& p : points) mean += p.probability * p.alpha;
  return {DistributionKind::Discrete, mean, 0.0, std::move(points)};
}

DisorderDistribution DisorderDistribution::delta(double alpha0) { return discrete({{1.0, alpha0}}); }

double DisorderDistribution::pdf(double alpha) const {
  constexpr double pi = std::numbers::pi;
  switch (kind_) {
    case DistributionKind::Gaussian: {
      const double d = alpha - alpha0_;
      return std::exp(-d * d / (2.0 * gamma_)) / std::sqrt(2.0 * pi * gamma_);
    }
    case DistributionKind::CauchyLorentz: {
      const double d = alpha - alpha0_;
      return gamma_ / (pi * (d * d + gamma_ * gamma_));
    }
    case DistributionKind::Discrete:
      break;
  }
  throw Error(ErrorKind::Parameter, "discrete disorder has no density");
}

double DisorderDistribution::location() const { return alpha0_; }

DisorderDistribution DisorderDistribution::scaled(double factor) const {
  if (factor == 0.0 || !std::isfinite(factor)) throw Error(ErrorKind::Parameter, "scale factor must be finite and nonzero");
  switch (kind_) {
    case DistributionKind::Gaussian: return gaussian(factor * alpha0_, factor * factor * gamma_);
    case DistributionKind::CauchyLorentz: return cauchy(factor * alpha0_, std::abs(factor) * gamma_);
    case DistributionKind::Discrete: {
      std::vector<DiscretePoint> pts = points_;
      for (auto& p : pts) p.alpha *= factor;
      return discrete(std::move(pts));
    }
  }
  return *this;
}

std::string DisorderDistribution::describe() const {
  switch (kind_) {
    case DistributionKind::Gaussian: return fmt::format("gaussian(alpha0={}, variance={})", alpha0_, gamma_);
    case DistributionKind::CauchyLorentz: return fmt::format("cauchy(alpha0={}, gamma={})", alpha0_, gamma_);
    case DistributionKind::Discrete: return fmt::format("discrete({} points)", points_.size());
  }
  return "?";
}

Complex phi(const DisorderDistribution& d, double t) {
  switch (d.kind()) {
    case DistributionKind::Gaussian:
      return std::exp(Complex{-0.5 * d.gamma() * t * t, d.alpha0() * t});
    case DistributionKind::CauchyLorentz:
      return std::exp(Complex{-d.gamma() * std::abs(t), d.alpha0() * t});
    case DistributionKind::Discrete: {
      Complex s{0.0, 0.0};
      for (const auto& p : d.points()) s += p.probability * std::exp(Complex{0.0, p.alpha * t});
      return s;
    }
  }
  return {};
}

Complex log_derivative(const DisorderDistribution& d, double t) {
  switch (d.kind()) {
    case DistributionKind::Gaussian:
      return {-d.gamma() * t, d.alpha0()};
    case DistributionKind::CauchyLorentz:
      return {t >= 0.0 ? -d.gamma() : d.gamma(), d.alpha0()};
    case DistributionKind::Discrete: {
      const Complex f = phi(d, t);
      if (std::abs(f) <= kPhiSingularity) {
        throw Error(ErrorKind::Singularity, fmt::format("characteristic function vanishes at t = {}", t));
      }
      Complex df{0.0, 0.0};
      for (const auto& p : d.points()) df += p.probability * Complex{0.0, p.alpha} * std::exp(Complex{0.0, p.alpha * t});
      return df / f;
    }
  }
  return {};
}

DephasingCoefficients master_coefficients(const DisorderDistribution& d, double t, DerivativeMode mode) {
  Complex ld;
  if (mode == DerivativeMode::Analytic) {
    ld = log_derivative(d, t);
  } else {
    const Complex f = phi(d, t);
    if (std::abs(f) <= kPhiSingularity) {
      throw Error(ErrorKind::Singularity, fmt::format("characteristic function vanishes at t = {}", t));
    }
    const double h = kFiniteDifferenceStep;
    // One-sided near t = 0 so the Cauchy-Lorentz kink is not straddled.
    const Complex df = (t >= h || t <= -h) ? (phi(d, t + h) - phi(d, t - h)) / (2.0 * h)
                                           : (-3.0 * f + 4.0 * phi(d, t + h) - phi(d, t + 2.0 * h)) / (2.0 * h);
    ld = df / f;
  }
  if (!std::isfinite(ld.real()) || !std::isfinite(ld.imag())) {
    throw Error(ErrorKind::Singularity, fmt::format("non-finite log-derivative at t = {}", t));
  }
  return {0.5 * ld.imag(), -0.5 * ld.real()};
}

quadrature::Rule distribution_rule(const DisorderDistribution& d, double omega_max, int level) {
  switch (d.kind()) {
    case DistributionKind::Gaussian: {
      quadrature::Rule r = quadrature::gauss_hermite(64 << level);
      const double s = std::sqrt(2.0 * d.gamma());
      for (auto& x : r.nodes) x = d.alpha0() + s * x;
      for (auto& w : r.weights) w /= std::sqrt(std::numbers::pi);
      return r;
    }
    case DistributionKind::CauchyLorentz:
      return quadrature::cauchy_graded(d.alpha0(), d.gamma(), omega_max, level);
    case DistributionKind::Discrete: {
      quadrature::Rule r;
      for (const auto& p : d.points()) {
        r.nodes.push_back(p.alpha);
        r.weights.push_back(p.probability);
      }
      return r;
    }
  }
  return {};
}

quadrature::Rule coarse_rule(const DisorderDistribution& d, int count) {
  if (count < 1) throw Error(ErrorKind::Parameter, "rule needs at least one node");
  switch (d.kind()) {
    case DistributionKind::Gaussian: {
      quadrature::Rule r = quadrature::gauss_hermite(count);
      const double s = std::sqrt(2.0 * d.gamma());
      for (auto& x : r.nodes) x = d.alpha0() + s * x;
      for (auto& w : r.weights) w /= std::sqrt(std::numbers::pi);
      return r;
    }
    case DistributionKind::CauchyLorentz: {
      quadrature::Rule r = quadrature::gauss_legendre(count);
      for (std::size_t k = 0; k < r.nodes.size(); ++k) {
        const double u = 0.5 * std::numbers::pi * r.nodes[k];
        r.nodes[k] = d.alpha0() + d.gamma() * std::tan(u);
        r.weights[k] *= 0.5;  // (pi/2) * (1/pi)
      }
      return r;
    }
    case DistributionKind::Discrete:
      return distribution_rule(d, 0.0);
  }
  return {};
}

Complex phi_quadrature(const DisorderDistribution& d, double t, int level) {
  const quadrature::Rule r = distribution_rule(d, std::abs(t), level);
  Complex s{0.0, 0.0};
  for (std::size_t k = 0; k < r.nodes.size(); ++k) s += r.weights[k] * std::exp(Complex{0.0, r.nodes[k] * t});
  return s;
}

std::vector<double> sample_alphas(const DisorderDistribution& d, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out;
  out.reserve(count);
  switch (d.kind()) {
    case DistributionKind::Gaussian: {
      std::normal_distribution<double> dist(d.alpha0(), std::sqrt(d.gamma()));
      for (std::size_t k = 0; k < count; ++k) out.push_back(dist(rng));
      break;
    }
    case DistributionKind::CauchyLorentz: {
      std::cauchy_distribution<double> dist(d.alpha0(), d.gamma());
      for (std::size_t k = 0; k < count; ++k) out.push_back(dist(rng));
      break;
    }
    case DistributionKind::Discrete: {
      std::vector<double> probs;
      for (const auto& p : d.points()) probs.push_back(p.probability);
      std::discrete_distribution<std::size_t> dist(probs.begin(), probs.end());
      for (std::size_t k = 0; k < count; ++k) out.push_back(d.points()[dist(rng)].alpha);
      break;
    }
  }
  return out;
}

HamiltonianEnsemble HamiltonianEnsemble::generator_form(DisorderDistribution d, PauliSum generator, PauliSum base) {
  if (generator.n_qubits() <= 0) throw Error(ErrorKind::Parameter, "ensemble generator has no register");
  if (!base.empty() && base.n_qubits() != generator.n_qubits()) {
    throw Error(ErrorKind::Dimension, "ensemble base and generator act on different registers");
  }
  HamiltonianEnsemble e;
  e.generator_form_ = true;
  e.n_qubits_ = generator.n_qubits();
  e.distribution_ = std::move(d);
  const CMatrix g = dense(generator);
  if (!base.empty()) {
    const CMatrix b = dense(base);
    e.commuting_ = (g * b - b * g).cwiseAbs().maxCoeff() <= 1e-10;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(g);
  e.g_values_ = solver.eigenvalues();
  e.g_vectors_ = solver.eigenvectors();
  e.generator_ = std::move(generator);
  e.base_ = base.empty() ? PauliSum(e.n_qubits_) : std::move(base);
  return e;
}

HamiltonianEnsemble HamiltonianEnsemble::explicit_list(std::vector<std::pair<double, PauliSum>> members) {
  if (members.empty()) throw Error(ErrorKind::Parameter, "ensemble needs at least one member");
  HamiltonianEnsemble e;
  e.n_qubits_ = members.front().second.n_qubits();
  double total = 0.0;
  for (const auto& [p, h] : members) {
    if (h.n_qubits() != e.n_qubits_) throw Error(ErrorKind::Dimension, "ensemble members act on different registers");
    if (!(p >= 0.0)) throw Error(ErrorKind::Parameter, "ensemble probabilities must be >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorKind::Parameter, fmt::format("ensemble probabilities sum to {:.15g}, not 1", total));
  }
  e.members_ = std::move(members);
  e.generator_ = PauliSum(e.n_qubits_);
  e.base_ = PauliSum(e.n_qubits_);
  return e;
}

const DisorderDistribution& HamiltonianEnsemble::distribution() const {
  if (!distribution_) throw Error(ErrorKind::Parameter, "list-form ensemble has no disorder distribution");
  return *distribution_;
}

PauliSum HamiltonianEnsemble::realization(double alpha) const {
  if (!generator_form_) throw Error(ErrorKind::Parameter, "list-form ensemble has no alpha parametrization");
  return alpha * generator_ + base_;
}

PauliSum HamiltonianEnsemble::mean_hamiltonian() const {
  if (generator_form_) return realization(distribution_->location());
  PauliSum s(n_qubits_);
  for (const auto& [p, h] : members_) s += p * h;
  return s;
}

double HamiltonianEnsemble::generator_spread() const noexcept {
  if (!generator_form_ || g_values_.size() == 0) return 0.0;
  return g_values_.maxCoeff() - g_values_.minCoeff();
}

namespace {

void check_state(const HamiltonianEnsemble& e, const DensityMatrix& rho0) {
  if (rho0.n_qubits() != e.n_qubits()) {
    throw Error(ErrorKind::Dimension,
                fmt::format("state has {} qubits, ensemble acts on {}", rho0.n_qubits(), e.n_qubits()));
  }
}

CMatrix rotate(const CMatrix& rho, const PauliSum& h, double t) {
  if (h.empty()) return rho;
  const CMatrix u = exponential(h, t);
  return u * rho * u.adjoint();
}

}  // namespace

DensityMatrix ensemble_average(const HamiltonianEnsemble& e, const DensityMatrix& rho0, double t) {
  check_state(e, rho0);
  if (!e.is_generator_form()) {
    CMatrix acc = CMatrix::Zero(rho0.dim(), rho0.dim());
    for (const auto& [p, h] : e.members()) acc += p * rotate(rho0.matrix(), h, t);
    DensityMatrix out(std::move(acc));
    out.require_valid("ensemble average");
    return out;
  }
  if (!e.base_commutes()) return ensemble_average_quadrature(e, rho0, t);
  const CMatrix& v = e.generator_eigenvectors();
  const RVector& g = e.generator_eigenvalues();
  CMatrix in_basis = v.adjoint() * rho0.matrix() * v;
  for (Eigen::Index m = 0; m < in_basis.rows(); ++m) {
    for (Eigen::Index n = 0; n < in_basis.cols(); ++n) {
      in_basis(m, n) *= phi(e.distribution(), -(g(m) - g(n)) * t);
    }
  }
  DensityMatrix out(rotate(v * in_basis * v.adjoint(), e.base(), t));
  out.require_valid("ensemble average");
  return out;
}

DensityMatrix ensemble_average_quadrature(const HamiltonianEnsemble& e, const DensityMatrix& rho0, double t,
                                          const QuadratureOptions& opts) {
  check_state(e, rho0);
  if (!e.is_generator_form()) return ensemble_average(e, rho0, t);
  // Without [G, B] = 0 the alpha dependence is not a pure phase; the spread
  // of alpha G + B over the realizations still bounds the oscillation rate.
  const double omega = (e.generator_spread() + (e.base_commutes() ? 0.0 : 2.0 * e.base().l1_norm())) * std::abs(t);
  const bool refine = e.distribution().kind() != DistributionKind::Discrete;

  const CMatrix g = dense(e.generator());
  const CMatrix b = e.base().empty() ? CMatrix::Zero(rho0.dim(), rho0.dim()).eval() : dense(e.base());
  auto evaluate = [&](int level) {
    const quadrature::Rule r = distribution_rule(e.distribution(), omega, level);
    CMatrix acc = CMatrix::Zero(rho0.dim(), rho0.dim());
    for (std::size_t k = 0; k < r.nodes.size(); ++k) {
      const CMatrix u = HermitianExponential(r.nodes[k] * g + b)(t);
      acc += r.weights[k] * (u * rho0.matrix() * u.adjoint());
    }
    return acc;
  };

  CMatrix previous = evaluate(0);
  if (!refine) return DensityMatrix(previous);
  for (int level = 1; level <= opts.max_level; ++level) {
    CMatrix current = evaluate(level);
    const double change = (current - previous).cwiseAbs().maxCoeff();
    if (change <= opts.tolerance) {
      DensityMatrix out(std::move(current));
      out.require_valid("ensemble average");
      return out;
    }
    previous = std::move(current);
  }
  throw Error(ErrorKind::Accuracy,
              fmt::format("ensemble quadrature at t = {} did not converge to {:.1g} within {} refinements", t,
                          opts.tolerance, opts.max_level));
}

DensityMatrix ensemble_average_monte_carlo(const HamiltonianEnsemble& e, const DensityMatrix& rho0, double t,
                                           std::size_t samples, std::uint64_t seed) {
  check_state(e, rho0);
  if (samples == 0) throw Error(ErrorKind::Parameter, "Monte Carlo average needs at least one sample");
  CMatrix acc = CMatrix::Zero(rho0.dim(), rho0.dim());
  if (e.is_generator_form()) {
    for (double alpha : sample_alphas(e.distribution(), samples, seed)) {
      acc += rotate(rho0.matrix(), e.realization(alpha), t);
    }
  } else {
    std::vector<double> probs;
    for (const auto& m : e.members()) probs.push_back(m.first);
    std::mt19937_64 rng(seed);
    std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
    for (std::size_t s = 0; s < samples; ++s) acc += rotate(rho0.matrix(), e.members()[pick(rng)].second, t);
  }
  return DensityMatrix(acc / static_cast<double>(samples));
}

}  // namespace vardyn
