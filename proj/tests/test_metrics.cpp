#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "vardyn/error.hpp"
#include "vardyn/metrics.hpp"

using namespace vardyn;

namespace {

// Concurrence exactly as the defining formula reads: eigenvalues of the
// non-Hermitian product rho (YY) rho^* (YY), clamped and sorted.
double concurrence_verbatim(const CMatrix& rho) {
  const CMatrix yy = oracle::kron_string("YY");
  const CMatrix tilde = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<CMatrix> solver(tilde);
  std::vector<double> l;
  for (Eigen::Index k = 0; k < 4; ++k) l.push_back(std::max(0.0, solver.eigenvalues()(k).real()));
  std::sort(l.rbegin(), l.rend());
  return std::max(0.0, std::sqrt(l[0]) - std::sqrt(l[1]) - std::sqrt(l[2]) - std::sqrt(l[3]));
}

double fidelity_oracle(const CMatrix& rho, const CMatrix& sigma) {
  const CMatrix root = rho.sqrt();
  const CMatrix inner = root * sigma * root;
  const Complex s = inner.sqrt().trace();
  return s.real() * s.real();
}

DensityMatrix ket(std::initializer_list<Complex> amps) {
  CVector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index k = 0;
  for (Complex a : amps) v(k++) = a;
  return from_pure(PureState(v, Normalization::Renormalize));
}

}  // namespace

TEST_CASE("trace distance examples") {
  const DensityMatrix zero = ket({1, 0}), one = ket({0, 1});
  const DensityMatrix mixed(CMatrix::Identity(2, 2) / 2.0);
  CHECK(trace_distance(zero, zero) == 0.0);
  CHECK(trace_distance(zero, one) == doctest::Approx(1.0));
  CHECK(trace_distance(zero, mixed) == doctest::Approx(0.5));
  CHECK_THROWS_AS(trace_distance(zero, from_pure(PureState::plus(2))), Error);
}

TEST_CASE("fidelity examples") {
  const DensityMatrix zero = ket({1, 0}), one = ket({0, 1});
  const DensityMatrix mixed(CMatrix::Identity(2, 2) / 2.0);
  CHECK(fidelity(zero, zero) == doctest::Approx(1.0));
  CHECK(fidelity(zero, one) == doctest::Approx(0.0));
  CHECK(fidelity(zero, mixed) == doctest::Approx(0.5));
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 0) = 1.2;
  bad(1, 1) = -0.2;
  CHECK_THROWS_AS(fidelity(DensityMatrix(bad), mixed), Error);
}

// Fidelity is sqrt-sensitive near rank-deficient states: a round-off sized
// eigenvalue of 1e-17 moves F by about 1e-8. Comparisons use 1e-7.
TEST_CASE("fidelity agrees with the matrix square-root oracle") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix a = oracle::random_density(4, 1 + trial % 4, rng);
    const CMatrix b = oracle::random_density(4, 4, rng);
    const double f = fidelity(DensityMatrix(a), DensityMatrix(b));
    CHECK(f == doctest::Approx(fidelity_oracle(b, a)).epsilon(1e-7));
    CHECK(f == doctest::Approx(fidelity(DensityMatrix(b), DensityMatrix(a))).epsilon(1e-7));
  }
}

TEST_CASE("concurrence examples") {
  const double s = M_SQRT1_2;
  CHECK(concurrence(ket({s, 0, 0, s})) == doctest::Approx(1.0));
  CHECK(concurrence(from_pure(PureState::plus(2))) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(concurrence(DensityMatrix(CMatrix::Identity(4, 4) / 4.0)) == 0.0);
  CHECK_THROWS_AS(concurrence(from_pure(PureState::plus(3))), Error);
}

TEST_CASE("concurrence matches the verbatim eigenvalue formula") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    const CMatrix rho = oracle::random_density(4, 1 + trial % 4, rng);
    // The non-Hermitian eigensolve loses accuracy like sqrt(round-off) on
    // rank-deficient inputs, hence the looser comparison.
    CHECK(concurrence(DensityMatrix(rho)) == doctest::Approx(concurrence_verbatim(rho)).epsilon(1e-6));
  }
}

TEST_CASE("metrics are invariant under a common change of basis") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = oracle::random_density(4, 2, rng), b = oracle::random_density(4, 3, rng);
    const CMatrix u = oracle::random_unitary(4, rng);
    const DensityMatrix ra(a), rb(b), ua(u * a * u.adjoint()), ub(u * b * u.adjoint());
    CHECK(trace_distance(ra, rb) == doctest::Approx(trace_distance(ua, ub)).epsilon(1e-12));
    CHECK(fidelity(ra, rb) == doctest::Approx(fidelity(ua, ub)).epsilon(1e-7));
  }
}

TEST_CASE("compare fills every field") {
  const MetricSample m = compare(0.5, from_pure(PureState::plus(2)), from_pure(PureState::phi0()));
  CHECK(m.t == 0.5);
  CHECK(m.concurrence_a == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(m.concurrence_b == doctest::Approx(1.0));
  const MetricSample one = compare(0.0, from_pure(PureState::plus(1)), from_pure(PureState::plus(1)));
  CHECK(std::isnan(one.concurrence_a));
  CHECK(one.fidelity == doctest::Approx(1.0));
}
