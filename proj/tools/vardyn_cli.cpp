// Command-line front end for the disorder-averaged variational dynamics runs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "vardyn/config.hpp"
#include "vardyn/error.hpp"
#include "vardyn/experiments.hpp"

namespace {

using namespace vardyn;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitCapacity = 4;

struct RunFlags {
  std::string config;
  std::string out;
  std::string diagnostics;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> shots;
  std::optional<std::string> mode;
  std::optional<double> dt;
  std::optional<double> tmax;
  std::optional<std::string> distribution;
  std::optional<double> alpha0;
  std::optional<double> gamma;
  std::optional<std::string> comparison;
  std::optional<std::string> reference;
  std::optional<int> chain_length;
  bool stream = false;
};

// Opens `path` for writing, or returns stdout when the path is empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw Error(ErrorKind::Config, fmt::format("cannot open '{}' for writing", path));
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

config::Table load_table(const std::string& path, const std::string& experiment) {
  config::Table table = config::parse_file(path);
  if (const config::Value* v = config::find(table, "experiment")) {
    if (v->as_string("experiment") != experiment) {
      const config::Position p = v->position();
      throw Error(ErrorKind::Config, fmt::format("{}:{}:{}: config is for '{}', not '{}'", path, p.line, p.column,
                                                 v->as_string("experiment"), experiment));
    }
  } else {
    table.insert(table.begin(), {"experiment", config::Value(std::string(experiment), {})});
  }
  return table;
}

DisorderDistribution distribution_from_flags(const RunFlags& f, const DisorderDistribution& fallback) {
  const std::string kind = f.distribution.value_or(
      fallback.kind() == DistributionKind::CauchyLorentz ? "cauchy" : "gaussian");
  const bool same_kind = (kind == "cauchy") == (fallback.kind() == DistributionKind::CauchyLorentz) &&
                         fallback.kind() != DistributionKind::Discrete;
  const double alpha0 = f.alpha0.value_or(fallback.alpha0());
  const double gamma = f.gamma.value_or(same_kind ? fallback.gamma() : 1.0);
  if (kind == "gaussian") return DisorderDistribution::gaussian(alpha0, gamma);
  if (kind == "cauchy") return DisorderDistribution::cauchy(alpha0, gamma);
  throw Error(ErrorKind::Config, fmt::format("unknown distribution '{}' (gaussian, cauchy)", kind));
}

void apply_flags(ExperimentConfig& cfg, const RunFlags& f) {
  if (f.seed) {
    cfg.estimator.seed = *f.seed;
    cfg.seed_given = true;
  }
  if (f.shots) cfg.estimator.shots = *f.shots;
  if (f.mode) cfg.estimator.mode = *f.mode == "sampled" ? EstimatorMode::Sampled : EstimatorMode::Exact;
  if (f.dt) cfg.solver.dt = *f.dt;
  if (f.tmax) cfg.solver.t_max = *f.tmax;
  if (f.distribution || f.alpha0 || f.gamma) cfg.distribution = distribution_from_flags(f, cfg.distribution);
  if (f.comparison) {
    cfg.comparison = *f.comparison == "per_realization_average" ? ComparisonMode::PerRealizationAverage
                                                                : ComparisonMode::MeanHamiltonian;
  }
  if (f.reference) cfg.reference = *f.reference == "master" ? ReferenceKind::Master : ReferenceKind::Ensemble;
  if (!f.out.empty()) cfg.output = f.out;
  if (!f.diagnostics.empty()) cfg.diagnostics = f.diagnostics;
}

int run_experiment_command(const std::string& experiment, const RunFlags& f) {
  ExperimentConfig cfg;
  if (!f.config.empty()) {
    config::Table table = load_table(f.config, experiment);
    if (f.chain_length) {
      if (config::find(table, "chain_length")) throw Error(ErrorKind::Config, "chain length given in both config and flags");
      table.emplace_back("chain_length", config::Value(config::Number{double(*f.chain_length), std::to_string(*f.chain_length)}, {}));
    }
    cfg = experiment_from_table(table);
  } else {
    cfg = experiment == "ising2q" ? ising2q_preset() : heisenberg_preset(f.chain_length.value_or(2));
  }
  apply_flags(cfg, f);
  check(cfg);

  Output csv(cfg.output);
  std::optional<Output> diag;
  if (!cfg.diagnostics.empty()) diag.emplace(cfg.diagnostics);

  RunSinks sinks;
  if (f.stream) {
    sinks.csv = [&](const std::string& line) { csv.stream() << line << '\n' << std::flush; };
  }
  if (diag) sinks.diagnostics = [&](const std::string& line) { diag->stream() << line << '\n'; };

  const ExperimentResult result = run_experiment(cfg, sinks);
  if (!f.stream) csv.stream() << render_csv(result, static_cast<Eigen::Index>(cfg.gates.size()));
  csv.stream().flush();
  if (!csv.stream()) throw Error(ErrorKind::Config, "failed writing the CSV output");
  return 0;
}

int run_phi_command(const RunFlags& f, const std::string& derivative) {
  DisorderDistribution d = DisorderDistribution::gaussian(0.0, 1.0);
  if (!f.config.empty()) {
    const config::Table table = config::parse_file(f.config);
    if (const config::Value* v = config::find(table, "distribution")) d = parse_distribution(*v);
  }
  if (f.distribution || f.alpha0 || f.gamma) d = distribution_from_flags(f, d);
  const DerivativeMode mode = derivative == "fd" ? DerivativeMode::FiniteDifference : DerivativeMode::Analytic;
  const auto rows = phi_table(d, f.tmax.value_or(5.0), f.dt.value_or(0.01), mode);
  Output out(f.out);
  out.stream() << render_phi_csv(rows);
  out.stream().flush();
  return 0;
}

int run_validate_command(const RunFlags& f) {
  const config::Table table = config::parse_file(f.config);
  const ExperimentConfig cfg = experiment_from_table(table);
  std::cout << fmt::format("{}: ok ({} qubits, {} gates, state {}, disorder {}, base {})\n", f.config, cfg.n_qubits,
                           cfg.gates.size(), cfg.state_label, cfg.distribution.describe(),
                           cfg.base.empty() ? "none" : cfg.base.str());
  return 0;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return kExitConfig;
    case ErrorKind::Capacity: return kExitCapacity;
    default: return kExitNumeric;
  }
}

void add_run_flags(CLI::App* cmd, RunFlags& f, bool heisenberg) {
  cmd->add_option("--config", f.config, "Config file")->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "CSV output path (default: stdout)");
  cmd->add_option("--diagnostics", f.diagnostics, "Per-step solver diagnostics CSV path");
  cmd->add_option("--seed", f.seed, "Estimator seed");
  cmd->add_option("--shots", f.shots, "Shots per ancilla estimate");
  cmd->add_option("--mode", f.mode, "Coefficient estimator")->check(CLI::IsMember({"exact", "sampled"}));
  cmd->add_option("--dt", f.dt, "Time step");
  cmd->add_option("--tmax", f.tmax, "Final time");
  cmd->add_option("--distribution", f.distribution, "Disorder law")->check(CLI::IsMember({"gaussian", "cauchy"}));
  cmd->add_option("--alpha0", f.alpha0, "Disorder center");
  cmd->add_option("--gamma", f.gamma, "Gaussian variance or Cauchy half-width");
  cmd->add_option("--comparison", f.comparison, "Variational comparison mode")
      ->check(CLI::IsMember({"mean_hamiltonian", "per_realization_average"}));
  cmd->add_option("--reference", f.reference, "Reference dynamics")->check(CLI::IsMember({"ensemble", "master"}));
  cmd->add_flag("--stream", f.stream, "Write CSV rows as they are computed");
  if (heisenberg) cmd->add_option("--chain-length", f.chain_length, "Number of spins (open chain)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational dynamics of disorder-averaged quantum states"};
  app.require_subcommand(1);

  RunFlags ising_flags, heis_flags, phi_flags, validate_flags;
  std::string derivative = "analytic";

  CLI::App* ising = app.add_subcommand("ising2q", "Two-qubit Ising ensemble experiment");
  add_run_flags(ising, ising_flags, false);
  CLI::App* heis = app.add_subcommand("heisenberg", "Heisenberg chain experiment with disordered J_z");
  add_run_flags(heis, heis_flags, true);

  CLI::App* phi_cmd = app.add_subcommand("phi", "Tabulate phi(t), eta(t), xi(t) for a disorder law");
  phi_cmd->add_option("--config", phi_flags.config, "Config file with a distribution entry")->check(CLI::ExistingFile);
  phi_cmd->add_option("--out", phi_flags.out, "CSV output path (default: stdout)");
  phi_cmd->add_option("--dt", phi_flags.dt, "Grid spacing (default 0.01)");
  phi_cmd->add_option("--tmax", phi_flags.tmax, "Final time (default 5)");
  phi_cmd->add_option("--distribution", phi_flags.distribution, "Disorder law")
      ->check(CLI::IsMember({"gaussian", "cauchy"}));
  phi_cmd->add_option("--alpha0", phi_flags.alpha0, "Disorder center");
  phi_cmd->add_option("--gamma", phi_flags.gamma, "Gaussian variance or Cauchy half-width");
  phi_cmd->add_option("--derivative", derivative, "Log-derivative evaluation")
      ->check(CLI::IsMember({"analytic", "fd"}));

  CLI::App* validate = app.add_subcommand("validate-config", "Parse and check a config file");
  validate->add_option("--config", validate_flags.config, "Config file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*ising) return run_experiment_command("ising2q", ising_flags);
    if (*heis) return run_experiment_command("heisenberg", heis_flags);
    if (*phi_cmd) return run_phi_command(phi_flags, derivative);
    if (*validate) return run_validate_command(validate_flags);
  } catch (const Error& e) {
    std::cerr << "vardyn: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "vardyn: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
