#include "vardyn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "vardyn/error.hpp"
#include "vardyn/pauli.hpp"

namespace vardyn {

namespace {

void same_shape(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::Dimension, fmt::format("states have dimensions {} and {}", a.dim(), b.dim()));
  }
}

// Hermitian square root of a PSD matrix, clamping round-off negatives.
CMatrix psd_sqrt(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
  const RVector roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
}

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  same_shape(rho, sigma);
  const CMatrix diff = rho.matrix() - sigma.matrix();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return clamp_unit(0.5 * solver.eigenvalues().cwiseAbs().sum());
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  same_shape(rho, sigma);
  for (const DensityMatrix* s : {&rho, &sigma}) {
    const ValidationReport r = validate(*s);
    if (r.min_eigenvalue < -kPsdTolerance) {
      throw Error(ErrorKind::Validation,
                  fmt::format("fidelity argument has eigenvalue {:.3g} below tolerance", r.min_eigenvalue));
    }
  }
  if (1.0 - purity(rho) <= 1e-12 || 1.0 - purity(sigma) <= 1e-12) {
    return clamp_unit((rho.matrix() * sigma.matrix()).trace().real());
  }
  const CMatrix root = psd_sqrt(rho.matrix());
  const CMatrix inner = root * sigma.matrix() * root;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  const double s = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return clamp_unit(s * s);
}

double concurrence(const DensityMatrix& rho) {
  if (rho.n_qubits() != 2) {
    throw Error(ErrorKind::Dimension, fmt::format("concurrence needs two qubits, got {}", rho.n_qubits()));
  }
  // The square roots of the eigenvalues of rho (YY) rho^* (YY) are the singular
  // values of W^T (YY) W for any factor rho = W W^dagger. Working with singular
  // values avoids the sqrt(round-off) error of the non-Hermitian eigenproblem.
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.matrix());
  const RVector weights = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMatrix w = solver.eigenvectors() * weights.asDiagonal();
  const CMatrix yy = dense(PauliString("YY"));
  const CMatrix tau = w.transpose() * yy * w;
  Eigen::JacobiSVD<CMatrix> svd(tau);
  const RVector& s = svd.singularValues();  // decreasing
  return clamp_unit(std::max(0.0, s(0) - s(1) - s(2) - s(3)));
}

MetricSample compare(double t, const DensityMatrix& variational, const DensityMatrix& reference) {
  MetricSample m;
  m.t = t;
  m.trace_distance = trace_distance(variational, reference);
  m.fidelity = fidelity(variational, reference);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const bool two = variational.n_qubits() == 2;
  m.concurrence_a = two ? concurrence(variational) : nan;
  m.concurrence_b = two ? concurrence(reference) : nan;
  return m;
}

}  // namespace vardyn
