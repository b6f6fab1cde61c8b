#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "vardyn/error.hpp"
#include "vardyn/master_equation.hpp"
#include "vardyn/metrics.hpp"

using namespace vardyn;

TEST_CASE("rhs hand expansions") {
  const DephasingModel z(PauliSum(1.0, PauliString("Z")), DisorderDistribution::gaussian(0.0, 1.0));
  const CMatrix plus = from_pure(PureState::plus(1)).matrix();
  const CMatrix d = z.rhs(plus, DephasingCoefficients{0.0, 0.7});
  CHECK(std::abs(d(0, 1) - (-2.0 * 0.7 * plus(0, 1))) < 1e-15);
  CHECK(std::abs(d(0, 0)) < 1e-15);
  CHECK(z.rhs(plus, DephasingCoefficients{0.0, 0.0}).isZero(0.0));

  // Diagonal in A's eigenbasis: nothing moves.
  const CMatrix diag = (CMatrix(2, 2) << 0.3, 0.0, 0.0, 0.7).finished();
  CHECK(z.rhs(diag, DephasingCoefficients{0.4, 0.9}).isZero(1e-15));

  // Coherent part: -i eta [Z, rho].
  const CMatrix coh = z.rhs(plus, DephasingCoefficients{0.5, 0.0});
  const CMatrix zz = oracle::pauli2('Z');
  CHECK(oracle::max_abs(coh - Complex{0.0, -0.5} * (zz * plus - plus * zz)) < 1e-15);
}

TEST_CASE("rhs is traceless and Hermitian for a general generator") {
  std::mt19937_64 rng(13);
  const DephasingModel m(parse_pauli_sum("1.0 ZZ; 0.5 XI"), DisorderDistribution::cauchy(0.2, 0.7));
  const CMatrix rho = oracle::random_density(4, 3, rng);
  const CMatrix d = m.rhs(rho, 0.8);
  CHECK(std::abs(d.trace()) < 1e-12);
  CHECK(hermiticity_residual(d) < 1e-14);
}

TEST_CASE("Cauchy dephasing of |+> decays as exp(-t)/2") {
  const DephasingModel z(PauliSum(1.0, PauliString("Z")), DisorderDistribution::cauchy(0.0, 1.0));
  const Propagation p = propagate(z, from_pure(PureState::plus(1)), 5.0, 1e-3);
  REQUIRE(p.times.size() == 5001);
  for (std::size_t k = 0; k < p.times.size(); k += 250) {
    CHECK(std::abs(p.states[k].matrix()(0, 1)) == doctest::Approx(0.5 * std::exp(-p.times[k])).epsilon(1e-9));
  }
}

TEST_CASE("propagation invariants") {
  const DephasingModel m(PauliSum(1.0, PauliString("ZZ")), DisorderDistribution::gaussian(0.5, 1.0));
  const DensityMatrix rho0 = from_pure(PureState::plus(2));
  const Propagation p = propagate(m, rho0, 3.0, 1e-3);
  double max_abs_coh = 1.0;
  for (const DensityMatrix& s : p.states) {
    const ValidationReport r = validate(s);
    CHECK(r.trace_residual < 1e-10);
    CHECK(r.hermiticity_residual < 1e-10);
    // ZZ is diagonal: the populations are the diagonal entries.
    for (Eigen::Index k = 0; k < 4; ++k) CHECK(std::abs(s.matrix()(k, k).real() - 0.25) < 1e-9);
    const double coh = std::abs(s.matrix()(0, 1));
    CHECK(coh <= max_abs_coh + 1e-15);
    max_abs_coh = coh;
  }
  const Propagation half = propagate(m, rho0, 3.0, 5e-4);
  CHECK(trace_distance(p.final_state(), half.final_state()) <= 1e-8);
}

TEST_CASE("propagation edge cases") {
  const DephasingModel z(PauliSum(1.0, PauliString("Z")), DisorderDistribution::gaussian(0.0, 1.0));
  const DensityMatrix rho0 = from_pure(PureState::plus(1));
  const Propagation zero = propagate(z, rho0, 0.0);
  CHECK(zero.states.size() == 1);
  CHECK(zero.final_state().matrix() == rho0.matrix());
  const Propagation odd = propagate(z, rho0, 0.0105, 0.001);
  CHECK(odd.times.back() == 0.0105);
  CHECK(odd.times.size() == 12);
  CHECK_THROWS_AS(propagate(z, rho0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(propagate(z, from_pure(PureState::plus(2)), 1.0), Error);
}

TEST_CASE("singular coefficients surface as an integration error with the step") {
  // phi(t) = cos(t) for alpha = +-1; the rate diverges at t = pi/2, which
  // lies on the grid below.
  const DephasingModel z(PauliSum(1.0, PauliString("Z")), DisorderDistribution::discrete({{0.5, -1.0}, {0.5, 1.0}}));
  try {
    (void)propagate(z, from_pure(PureState::plus(1)), 3.0, std::numbers::pi / 200.0);
    FAIL("expected an integration error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Integration);
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}
