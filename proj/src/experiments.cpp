#include "vardyn/experiments.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "vardyn/error.hpp"
#include "vardyn/master_equation.hpp"

namespace vardyn {

namespace {

PauliSum bond_sum(int n, std::initializer_list<Pauli> letters) {
  PauliSum s(n);
  for (int i = 0; i + 1 < n; ++i) {
    for (Pauli p : letters) {
      std::vector<Pauli> w(static_cast<std::size_t>(n), Pauli::I);
      w[static_cast<std::size_t>(i)] = p;
      w[static_cast<std::size_t>(i + 1)] = p;
      s += PauliSum(1.0, PauliString(w));
    }
  }
  return s;
}

[[noreturn]] void config_error(std::string_view field, const config::Value& v, const std::string& msg) {
  const config::Position p = v.position();
  throw Error(ErrorKind::Config, fmt::format("field '{}' (line {}, column {}): {}", field, p.line, p.column, msg));
}

// Runs `f`, turning library errors about the field's content into config errors.
template <class F>
auto in_field(std::string_view field, const config::Value& v, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config || e.kind() == ErrorKind::Capacity) throw;
    config_error(field, v, e.what());
  }
}

PauliSum pauli_field(std::string_view field, const config::Value& v, int n_hint) {
  return in_field(field, v, [&] { return parse_pauli_sum(v.as_string(field), n_hint); });
}

double complex_part(std::string_view field, const config::Value& v) { return v.as_number(field); }

CVector amplitudes_field(std::string_view field, const config::Value& v) {
  const config::Array& arr = v.as_array(field);
  CVector out(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const config::Value& a = arr[k];
    const auto idx = static_cast<Eigen::Index>(k);
    if (const auto* pair = std::get_if<config::Array>(&a.data())) {
      if (pair->size() != 2) config_error(field, a, "complex amplitudes are [re, im] pairs");
      out(idx) = {complex_part(field, (*pair)[0]), complex_part(field, (*pair)[1])};
    } else if (const auto* s = std::get_if<std::string>(&a.data())) {
      double re = 0.0, im = 0.0;
      char tail = 0;
      if (std::sscanf(s->c_str(), " %lf , %lf %c", &re, &im, &tail) != 2) {
        config_error(field, a, fmt::format("cannot read '{}' as \"re,im\"", *s));
      }
      out(idx) = {re, im};
    } else {
      out(idx) = {a.as_number(field), 0.0};
    }
  }
  return out;
}

}  // namespace

DisorderDistribution parse_distribution(const config::Value& v) {
  constexpr std::string_view field = "distribution";
  const config::Table& t = v.as_table(field);
  config::require_known_keys(t, {"kind", "alpha0", "gamma", "points"}, "distribution");
  const config::Value* kind = config::find(t, "kind");
  if (!kind) config_error(field, v, "missing 'kind'");
  const std::string& k = kind->as_string("distribution.kind");
  auto number = [&](std::string_view key, double fallback) {
    const config::Value* x = config::find(t, key);
    return x ? x->as_number(fmt::format("distribution.{}", key)) : fallback;
  };
  return in_field(field, v, [&] {
    if (k == "gaussian") return DisorderDistribution::gaussian(number("alpha0", 0.0), number("gamma", 1.0));
    if (k == "cauchy") return DisorderDistribution::cauchy(number("alpha0", 0.0), number("gamma", 1.0));
    if (k == "discrete") {
      const config::Value* pts = config::find(t, "points");
      if (!pts) config_error(field, v, "discrete distribution needs 'points'");
      std::vector<DiscretePoint> out;
      for (const config::Value& p : pts->as_array("distribution.points")) {
        const config::Array& pair = p.as_array("distribution.points");
        if (pair.size() != 2) config_error("distribution.points", p, "points are [p, alpha] pairs");
        out.push_back({pair[0].as_number("distribution.points"), pair[1].as_number("distribution.points")});
      }
      return DisorderDistribution::discrete(std::move(out));
    }
    config_error("distribution.kind", *kind, fmt::format("unknown kind '{}' (gaussian, cauchy, discrete)", k));
  });
}

namespace {

Gate gate_field(const config::Value& v, int n_hint) {
  const config::Table& t = v.as_table("gate");
  config::require_known_keys(t, {"generator", "sign"}, "gate");
  const config::Value* g = config::find(t, "generator");
  if (!g) config_error("gate", v, "missing 'generator'");
  Gate gate{pauli_field("gate.generator", *g, n_hint), +1};
  if (const config::Value* s = config::find(t, "sign")) {
    gate.sign = s->as_int("gate.sign");
    if (gate.sign != 1 && gate.sign != -1) config_error("gate.sign", *s, "sign must be +1 or -1");
  }
  return gate;
}

}  // namespace

ExperimentConfig ising2q_preset() {
  ExperimentConfig c;
  c.name = "ising2q";
  c.n_qubits = 2;
  c.gates = {{PauliSum(1.0, PauliString("ZZ")), -1}, {PauliSum(1.0, PauliString("XI")), -1}};
  c.lambda0 = RVector(2);
  c.lambda0 << 0.1, 0.0;  // (ZZ angle, X angle)
  c.state = PureState::plus(2).amplitudes();
  c.state_label = "plus_plus";
  c.distribution = DisorderDistribution::gaussian(0.0, 1.0);
  c.generator = PauliSum(1.0, PauliString("ZZ"));
  c.base = PauliSum(2);
  return c;
}

ExperimentConfig heisenberg_preset(int chain_length) {
  if (chain_length < 2) throw Error(ErrorKind::Config, fmt::format("chain_length must be at least 2, got {}", chain_length));
  if (chain_length > kDefaultMaxQubits) {
    throw Error(ErrorKind::Capacity,
                fmt::format("chain_length = {} exceeds the limit of {} qubits", chain_length, kDefaultMaxQubits));
  }
  ExperimentConfig c;
  c.name = "heisenberg";
  c.n_qubits = chain_length;
  const PauliSum hz = bond_sum(chain_length, {Pauli::Z});
  const PauliSum hxy = bond_sum(chain_length, {Pauli::X, Pauli::Y});
  c.gates = {{hz, -1}, {hxy, -1}};
  c.lambda0 = RVector(2);
  c.lambda0 << 0.1, 0.1;
  if (chain_length == 2) {
    c.state = PureState::phi0().amplitudes();
    c.state_label = "phi0";
  } else {
    c.state = PureState::plus(chain_length).amplitudes();
    c.state_label = "plus";
  }
  c.distribution = DisorderDistribution::gaussian(1.0, 1.0);
  c.generator = hz;
  c.base = hxy;
  return c;
}

ExperimentConfig experiment_from_table(const config::Table& table) {
  config::require_known_keys(table,
                             {"experiment", "chain_length", "n_qubits", "state", "gate", "lambda0", "hamiltonian",
                              "distribution", "generator", "base", "comparison", "reference", "realizations", "seed",
                              "output", "diagnostics", "solver.epsilon", "solver.cutoff", "solver.dt", "solver.t_max",
                              "solver.integrator", "estimator.mode", "estimator.shots"},
                             "config");
  ExperimentConfig c;
  const config::Value* exp = config::find(table, "experiment");
  const std::string name = exp ? exp->as_string("experiment") : "custom";
  if (name == "ising2q") {
    c = ising2q_preset();
  } else if (name == "heisenberg") {
    const config::Value* n = config::find(table, "chain_length");
    const int length = n ? n->as_int("chain_length") : 2;
    if (n && length < 2) config_error("chain_length", *n, "must be at least 2");
    c = heisenberg_preset(length);
  } else if (name == "custom") {
    c.name = "custom";
  } else {
    config_error("experiment", *exp, fmt::format("unknown experiment '{}' (ising2q, heisenberg, custom)", name));
  }
  if (name != "heisenberg" && config::find(table, "chain_length")) {
    config_error("chain_length", *config::find(table, "chain_length"), "only used by the heisenberg experiment");
  }

  if (const config::Value* v = config::find(table, "n_qubits")) {
    const int n = v->as_int("n_qubits");
    if (n < 1) config_error("n_qubits", *v, "must be >= 1");
    if (n > kDefaultMaxQubits) {
      throw Error(ErrorKind::Capacity, fmt::format("n_qubits = {} exceeds the limit of {}", n, kDefaultMaxQubits));
    }
    if (name != "custom" && n != c.n_qubits) config_error("n_qubits", *v, "conflicts with the preset");
    c.n_qubits = n;
  }

  const auto gates = config::find_all(table, "gate");
  if (!gates.empty()) {
    c.gates.clear();
    for (const config::Value* g : gates) c.gates.push_back(gate_field(*g, c.n_qubits));
    if (c.n_qubits == 0) c.n_qubits = c.gates.front().generator.n_qubits();
  }

  if (const config::Value* v = config::find(table, "state")) {
    if (const auto* s = std::get_if<std::string>(&v->data())) {
      if (c.n_qubits == 0) config_error("state", *v, "preset states need n_qubits or gates first");
      c.state = in_field("state", *v, [&] { return preset_state(*s, c.n_qubits).amplitudes(); });
      c.state_label = *s;
    } else {
      const CVector amps = amplitudes_field("state", *v);
      c.state = in_field("state", *v, [&] { return PureState(amps).amplitudes(); });
      c.state_label = "amplitudes";
    }
  }

  if (const config::Value* v = config::find(table, "lambda0")) {
    const config::Array& arr = v->as_array("lambda0");
    c.lambda0 = RVector(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t k = 0; k < arr.size(); ++k) c.lambda0(static_cast<Eigen::Index>(k)) = arr[k].as_number("lambda0");
  }
  if (const config::Value* v = config::find(table, "hamiltonian")) {
    c.hamiltonian = pauli_field("hamiltonian", *v, c.n_qubits);
  }
  if (const config::Value* v = config::find(table, "distribution")) c.distribution = parse_distribution(*v);
  if (const config::Value* v = config::find(table, "generator")) c.generator = pauli_field("generator", *v, c.n_qubits);
  if (const config::Value* v = config::find(table, "base")) c.base = pauli_field("base", *v, c.n_qubits);

  if (const config::Value* v = config::find(table, "comparison")) {
    const std::string& m = v->as_string("comparison");
    if (m == "mean_hamiltonian") {
      c.comparison = ComparisonMode::MeanHamiltonian;
    } else if (m == "per_realization_average") {
      c.comparison = ComparisonMode::PerRealizationAverage;
    } else {
      config_error("comparison", *v, fmt::format("unknown mode '{}' (mean_hamiltonian, per_realization_average)", m));
    }
  }
  if (const config::Value* v = config::find(table, "reference")) {
    const std::string& m = v->as_string("reference");
    if (m == "ensemble") {
      c.reference = ReferenceKind::Ensemble;
    } else if (m == "master") {
      c.reference = ReferenceKind::Master;
    } else {
      config_error("reference", *v, fmt::format("unknown reference '{}' (ensemble, master)", m));
    }
  }
  if (const config::Value* v = config::find(table, "realizations")) {
    c.realizations = v->as_int("realizations");
    if (c.realizations < 1) config_error("realizations", *v, "must be >= 1");
  }
  if (const config::Value* v = config::find(table, "seed")) {
    c.estimator.seed = v->as_u64("seed");
    c.seed_given = true;
  }
  if (const config::Value* v = config::find(table, "output")) c.output = v->as_string("output");
  if (const config::Value* v = config::find(table, "diagnostics")) c.diagnostics = v->as_string("diagnostics");

  if (const config::Value* v = config::find(table, "solver.epsilon")) c.solver.epsilon = v->as_number("solver.epsilon");
  if (const config::Value* v = config::find(table, "solver.cutoff")) c.solver.cutoff = v->as_number("solver.cutoff");
  if (const config::Value* v = config::find(table, "solver.dt")) c.solver.dt = v->as_number("solver.dt");
  if (const config::Value* v = config::find(table, "solver.t_max")) c.solver.t_max = v->as_number("solver.t_max");
  if (const config::Value* v = config::find(table, "solver.integrator")) {
    const std::string& s = v->as_string("solver.integrator");
    if (s == "euler") {
      c.solver.integrator = Integrator::Euler;
    } else if (s == "rk4") {
      c.solver.integrator = Integrator::RK4;
    } else {
      config_error("solver.integrator", *v, fmt::format("unknown integrator '{}' (euler, rk4)", s));
    }
  }
  if (const config::Value* v = config::find(table, "estimator.mode")) {
    const std::string& s = v->as_string("estimator.mode");
    if (s == "exact") {
      c.estimator.mode = EstimatorMode::Exact;
    } else if (s == "sampled") {
      c.estimator.mode = EstimatorMode::Sampled;
    } else {
      config_error("estimator.mode", *v, fmt::format("unknown mode '{}' (exact, sampled)", s));
    }
  }
  if (const config::Value* v = config::find(table, "estimator.shots")) c.estimator.shots = v->as_u64("estimator.shots");

  check(c);
  return c;
}

void check(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::Config, msg); };
  if (cfg.n_qubits < 1) fail("n_qubits is not set");
  if (cfg.n_qubits > kDefaultMaxQubits) {
    throw Error(ErrorKind::Capacity, fmt::format("n_qubits = {} exceeds the limit of {}", cfg.n_qubits, kDefaultMaxQubits));
  }
  if (cfg.gates.empty()) fail("no gates given");
  for (std::size_t k = 0; k < cfg.gates.size(); ++k) {
    if (cfg.gates[k].generator.n_qubits() != cfg.n_qubits) {
      fail(fmt::format("gate {} acts on {} qubits, expected {}", k + 1, cfg.gates[k].generator.n_qubits(), cfg.n_qubits));
    }
  }
  if (cfg.lambda0.size() != static_cast<Eigen::Index>(cfg.gates.size())) {
    fail(fmt::format("lambda0 has {} entries for {} gates", cfg.lambda0.size(), cfg.gates.size()));
  }
  if (cfg.state.size() != (Eigen::Index{1} << cfg.n_qubits)) fail("initial state does not match n_qubits");
  if (cfg.generator.n_qubits() != cfg.n_qubits || cfg.generator.empty()) fail("ensemble generator missing or mismatched");
  if (!cfg.base.empty() && cfg.base.n_qubits() != cfg.n_qubits) fail("ensemble base acts on the wrong register");
  if (cfg.hamiltonian && cfg.hamiltonian->n_qubits() != cfg.n_qubits) fail("hamiltonian acts on the wrong register");
  if (cfg.reference == ReferenceKind::Master && !cfg.base.empty()) {
    fail("reference = \"master\" needs an ensemble without a base term");
  }
  if (cfg.estimator.mode == EstimatorMode::Sampled) {
    if (!cfg.seed_given) fail("sampled estimation needs an explicit seed");
    if (cfg.estimator.shots < 10) fail("sampled estimation needs at least 10 shots");
  }
  try {
    cfg.solver.check();
  } catch (const Error& e) {
    fail(fmt::format("solver: {}", e.what()));
  }
}

HamiltonianEnsemble make_ensemble(const ExperimentConfig& cfg) {
  return HamiltonianEnsemble::generator_form(cfg.distribution, cfg.generator, cfg.base);
}

PauliSum drive_hamiltonian(const ExperimentConfig& cfg) {
  return cfg.hamiltonian ? *cfg.hamiltonian : make_ensemble(cfg).mean_hamiltonian();
}

DensityMatrix initial_state(const ExperimentConfig& cfg) { return from_pure(PureState(cfg.state)); }

DiagnosticsRow make_diagnostics(std::size_t step, double t, const StepRecord& rec, Eigen::Index n_params) {
  DiagnosticsRow d;
  d.step = step;
  d.t = t;
  d.condition = rec.solve.condition;
  d.residual = rec.solve.residual;
  d.v_norm = rec.solve.v_norm;
  d.relative_residual = rec.solve.v_norm > 0.0 ? rec.solve.residual / rec.solve.v_norm : 0.0;
  d.effective_rank = rec.solve.effective_rank;
  d.imag_residual = rec.imag_residual;
  if (rec.solve.effective_rank == 0) {
    d.status = "zero_flow";
  } else if (rec.solve.effective_rank < n_params) {
    d.status = "rank_deficient";
  } else {
    d.status = "ok";
  }
  return d;
}

namespace {

struct Reference {
  std::optional<HamiltonianEnsemble> ensemble;
  std::optional<Propagation> master;
  DensityMatrix rho0;

  DensityMatrix at(std::size_t index, double t) const {
    if (master) {
      if (std::abs(master->times.at(index) - t) > 1e-9) {
        throw Error(ErrorKind::Consistency, "master-equation grid differs from the variational grid");
      }
      return master->states[index];
    }
    return ensemble_average(*ensemble, rho0, t);
  }
};

Reference make_reference(const ExperimentConfig& cfg, const DensityMatrix& rho0) {
  Reference r{std::nullopt, std::nullopt, rho0};
  if (cfg.reference == ReferenceKind::Master) {
    // alpha G with alpha ~ p pairs with the master equation for the law of 2 alpha.
    const DephasingModel model(cfg.generator, cfg.distribution.scaled(2.0));
    r.master = propagate(model, rho0, cfg.solver.t_max, cfg.solver.dt);
  } else {
    r.ensemble = make_ensemble(cfg);
  }
  return r;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunSinks& sinks) {
  check(cfg);
  const DensityMatrix rho0 = initial_state(cfg);
  const AnsatzCircuit circuit(cfg.gates);
  const ParamVector lam0(cfg.lambda0);
  const Eigen::Index n_params = circuit.n_params();
  const Reference reference = make_reference(cfg, rho0);

  ExperimentResult out;
  if (sinks.csv) sinks.csv(csv_header(n_params));
  if (sinks.diagnostics) sinks.diagnostics(diagnostics_header());

  auto emit = [&](std::size_t index, double t, const RVector& lambda, DensityMatrix variational,
                  const StepRecord& rec) {
    DensityMatrix ref = reference.at(index, t);
    ResultRow row;
    row.t = t;
    row.lambda = lambda;
    row.metrics = compare(t, variational, ref);
    row.residual = rec.solve.residual;
    row.effective_rank = rec.solve.effective_rank;
    DiagnosticsRow diag = make_diagnostics(index, t, rec, n_params);
    if (sinks.csv) sinks.csv(csv_line(row));
    if (sinks.diagnostics) sinks.diagnostics(diagnostics_line(diag));
    out.rows.push_back(std::move(row));
    out.diagnostics.push_back(std::move(diag));
    out.variational.push_back(std::move(variational));
    out.reference.push_back(std::move(ref));
  };

  if (cfg.comparison == ComparisonMode::MeanHamiltonian) {
    const PauliSum h = drive_hamiltonian(cfg);
    run(circuit, lam0, rho0, h, cfg.solver, cfg.estimator, [&](const TrajectoryRecord& rec, std::size_t k) {
      emit(k, rec.times[k], rec.params[k].values(), rec.states[k], rec.diagnostics[k]);
    });
    return out;
  }

  // Per-realization average over the quadrature nodes of p(alpha).
  const HamiltonianEnsemble ensemble = make_ensemble(cfg);
  const quadrature::Rule rule = coarse_rule(cfg.distribution, cfg.realizations);
  std::vector<TrajectoryRecord> runs;
  runs.reserve(rule.nodes.size());
  for (std::size_t r = 0; r < rule.nodes.size(); ++r) {
    EstimatorConfig est = cfg.estimator;
    est.seed = derive_seed(cfg.estimator.seed, {0x7265616cULL, r});
    try {
      runs.push_back(run(circuit, lam0, rho0, ensemble.realization(rule.nodes[r]), cfg.solver, est));
    } catch (const Error& e) {
      throw e.with_context(fmt::format("realization {} (alpha = {})", r, rule.nodes[r]));
    }
  }
  const std::size_t n_times = runs.front().times.size();
  for (std::size_t k = 0; k < n_times; ++k) {
    CMatrix rho = CMatrix::Zero(rho0.dim(), rho0.dim());
    RVector lambda = RVector::Zero(n_params);
    StepRecord worst;
    worst.solve.effective_rank = n_params;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const double w = rule.weights[r];
      rho += w * runs[r].states[k].matrix();
      lambda += w * runs[r].params[k].values();
      const StepRecord& s = runs[r].diagnostics[k];
      worst.solve.residual = std::max(worst.solve.residual, s.solve.residual);
      worst.solve.v_norm = std::max(worst.solve.v_norm, s.solve.v_norm);
      worst.solve.condition = std::max(worst.solve.condition, s.solve.condition);
      worst.solve.effective_rank = std::min(worst.solve.effective_rank, s.solve.effective_rank);
      worst.imag_residual = std::max(worst.imag_residual, s.imag_residual);
    }
    DensityMatrix averaged(std::move(rho));
    averaged.require_valid("averaged variational state");
    emit(k, runs.front().times[k], lambda, std::move(averaged), worst);
  }
  return out;
}

std::string csv_header(Eigen::Index n_params) {
  std::string h = "t";
  for (Eigen::Index k = 0; k < n_params; ++k) h += fmt::format(",lambda_{}", k + 1);
  h += ",trace_distance,fidelity,concurrence_var,concurrence_exact,residual,eff_rank";
  return h;
}

std::string csv_line(const ResultRow& row) {
  std::string s = fmt::format("{:.17g}", row.t);
  for (Eigen::Index k = 0; k < row.lambda.size(); ++k) s += fmt::format(",{:.17g}", row.lambda(k));
  s += fmt::format(",{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}", row.metrics.trace_distance, row.metrics.fidelity,
                   row.metrics.concurrence_a, row.metrics.concurrence_b, row.residual, row.effective_rank);
  return s;
}

std::string diagnostics_header() {
  return "step,t,condition,residual,relative_residual,v_norm,eff_rank,imag_residual,status";
}

std::string diagnostics_line(const DiagnosticsRow& d) {
  return fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{:.17g},{}", d.step, d.t, d.condition, d.residual,
                     d.relative_residual, d.v_norm, d.effective_rank, d.imag_residual, d.status);
}

std::string render_csv(const ExperimentResult& result, Eigen::Index n_params) {
  std::string s = csv_header(n_params) + "\n";
  for (const ResultRow& r : result.rows) s += csv_line(r) + "\n";
  return s;
}

std::vector<PhiRow> phi_table(const DisorderDistribution& d, double t_max, double dt, DerivativeMode mode) {
  if (!(dt > 0.0) || !(t_max >= 0.0)) throw Error(ErrorKind::Config, "phi table needs dt > 0 and t_max >= 0");
  const std::size_t n = step_count(t_max, dt);
  std::vector<PhiRow> rows;
  rows.reserve(n + 1);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k <= n; ++k) {
    PhiRow r;
    r.t = k == n ? t_max : static_cast<double>(k) * dt;
    r.phi = phi(d, r.t);
    try {
      const DephasingCoefficients c = master_coefficients(d, r.t, mode);
      r.eta = c.eta;
      r.xi = c.xi;
      r.status = "ok";
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Singularity) throw;
      r.eta = r.xi = nan;
      r.status = "singular";
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string render_phi_csv(const std::vector<PhiRow>& rows) {
  std::string s = "t,re_phi,im_phi,eta,xi,status\n";
  for (const PhiRow& r : rows) {
    s += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", r.t, r.phi.real(), r.phi.imag(), r.eta, r.xi,
                     r.status);
  }
  return s;
}

}  // namespace vardyn
