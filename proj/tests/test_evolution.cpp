#include <doctest.h>

#include <cmath>
#include <limits>

#include "vardyn/error.hpp"
#include "vardyn/evolution.hpp"

using namespace vardyn;

namespace {

CoefficientSet system(RMatrix m, RVector v) {
  CoefficientSet cs;
  cs.m = std::move(m);
  cs.v = std::move(v);
  return cs;
}

AnsatzCircuit generic_circuit() {
  return AnsatzCircuit({{parse_pauli_sum("0.7 XY; 0.3 ZI"), +1}, {parse_pauli_sum("1.0 YZ; 0.5 IX"), -1}});
}

}  // namespace

TEST_CASE("regularized solve on a diagonal system") {
  const SolverConfig cfg;
  RMatrix m = RMatrix::Zero(2, 2);
  m(0, 0) = 2.0;
  m(1, 1) = 1e-3;
  const RVector v = (RVector(2) << 1.0, 1.0).finished();
  const LambdaDot sol = solve_lambda_dot(system(m, v), cfg);
  const double e2 = cfg.epsilon * cfg.epsilon;
  CHECK(sol.value(0) == doctest::Approx(2.0 / (4.0 + e2)).epsilon(1e-15));
  CHECK(sol.value(1) == doctest::Approx(1e-3 / (1e-6 + e2)).epsilon(1e-12));
  CHECK(sol.diagnostics.effective_rank == 2);
  CHECK(sol.diagnostics.condition == doctest::Approx(2000.0));
  CHECK(sol.diagnostics.residual < 1e-6 * sol.diagnostics.v_norm);
}

TEST_CASE("singular directions below the cutoff are dropped") {
  SolverConfig cfg;
  RMatrix m = RMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 1e-12;
  const RVector v = (RVector(2) << 1.0, 1.0).finished();
  const LambdaDot sol = solve_lambda_dot(system(m, v), cfg);
  CHECK(sol.value(1) == 0.0);
  CHECK(sol.diagnostics.effective_rank == 1);
  CHECK(sol.diagnostics.residual == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("zero system gives zero flow") {
  const LambdaDot sol = solve_lambda_dot(system(RMatrix::Zero(3, 3), RVector::Zero(3)), SolverConfig{});
  CHECK(sol.value.isZero(0.0));
  CHECK(sol.diagnostics.effective_rank == 0);
  CHECK(std::isinf(sol.diagnostics.condition));
  CHECK(sol.diagnostics.residual == 0.0);
}

TEST_CASE("solver input errors") {
  RMatrix m = RMatrix::Identity(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    (void)solve_lambda_dot(system(m, RVector::Ones(2)), SolverConfig{});
    FAIL("expected a numeric error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Numeric);
  }
  CHECK_THROWS_AS(solve_lambda_dot(system(RMatrix::Identity(2, 2), RVector::Ones(3)), SolverConfig{}), Error);
  SolverConfig bad;
  bad.dt = 0.0;
  CHECK_THROWS_AS(bad.check(), Error);
}

TEST_CASE("step count tolerates round-off and short last steps") {
  CHECK(step_count(5.0, 1e-3) == 5000);
  CHECK(step_count(1.0, 0.1) == 10);
  CHECK(step_count(0.0105, 0.001) == 11);
  CHECK(step_count(0.0, 0.1) == 0);
}

TEST_CASE("run stores every time and takes Euler steps") {
  const AnsatzCircuit c = generic_circuit();
  const DensityMatrix rho0 = from_pure(PureState::plus(2));
  const PauliSum h = parse_pauli_sum("1.0 ZZ; 0.4 XI");
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_max = 0.105;
  const ParamVector lam0{0.2, -0.4};
  const TrajectoryRecord rec = run(c, lam0, rho0, h, cfg, {});
  REQUIRE(rec.times.size() == 12);
  CHECK(rec.times.back() == 0.105);
  CHECK(rec.params.front() == lam0);
  for (const DensityMatrix& s : rec.states) CHECK(validate(s).ok());
  CHECK(rec.diagnostics.size() == rec.times.size());

  const LambdaDot first = solve_lambda_dot(exact_coefficients(c, lam0, rho0, h), cfg);
  CHECK((rec.params[1].values() - (lam0.values() + 0.01 * first.value)).norm() < 1e-15);
  const RVector last_rate = solve_lambda_dot(exact_coefficients(c, rec.params[10], rho0, h), cfg).value;
  CHECK((rec.params[11].values() - (rec.params[10].values() + 0.005 * last_rate)).norm() < 1e-14);
}

TEST_CASE("RK4 and Euler agree to first order and RK4 converges faster") {
  const AnsatzCircuit c = generic_circuit();
  const DensityMatrix rho0 = from_pure(PureState::basis(2, 1));
  const PauliSum h = parse_pauli_sum("1.0 ZZ; 0.4 XI");
  auto final = [&](Integrator integ, double dt) {
    SolverConfig cfg;
    cfg.t_max = 0.2;
    cfg.dt = dt;
    cfg.integrator = integ;
    cfg.epsilon = 0.0;
    return run(c, ParamVector{0.2, -0.4}, rho0, h, cfg, {}).params.back().values();
  };
  const RVector ref = final(Integrator::RK4, 1e-4);
  const double e_euler = (final(Integrator::Euler, 1e-2) - ref).norm();
  const double e_rk4 = (final(Integrator::RK4, 1e-2) - ref).norm();
  CHECK(e_rk4 < e_euler);
  CHECK(e_rk4 < 1e-7);
}

TEST_CASE("sampled runs are deterministic in the seed") {
  const AnsatzCircuit c = generic_circuit();
  const DensityMatrix rho0 = from_pure(PureState::plus(2));
  const PauliSum h = parse_pauli_sum("1.0 ZZ; 0.4 XI");
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_max = 0.05;
  const EstimatorConfig est{EstimatorMode::Sampled, 1000, 77};
  const TrajectoryRecord a = run(c, ParamVector{0.2, -0.4}, rho0, h, cfg, est);
  const TrajectoryRecord b = run(c, ParamVector{0.2, -0.4}, rho0, h, cfg, est);
  for (std::size_t k = 0; k < a.params.size(); ++k) CHECK(a.params[k] == b.params[k]);
  EstimatorConfig other = est;
  other.seed = 78;
  const TrajectoryRecord d = run(c, ParamVector{0.2, -0.4}, rho0, h, cfg, other);
  CHECK_FALSE(d.params.back() == a.params.back());
}

TEST_CASE("run errors carry the step") {
  const AnsatzCircuit c = generic_circuit();
  SolverConfig cfg;
  CHECK_THROWS_AS(run(c, ParamVector{0.1}, from_pure(PureState::plus(2)), parse_pauli_sum("ZZ"), cfg, {}), Error);
  CHECK_THROWS_AS(run(c, ParamVector{0.1, 0.2}, from_pure(PureState::plus(3)), parse_pauli_sum("ZZ"), cfg, {}),
                  Error);
  // Sampled mode with too few shots fails on the first step.
  try {
    (void)run(c, ParamVector{0.1, 0.2}, from_pure(PureState::plus(2)), parse_pauli_sum("ZZ"), cfg,
              {EstimatorMode::Sampled, 5, 1});
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    CHECK(std::string(e.what()).starts_with("step 0"));
  }
}
