#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vardyn/ansatz.hpp"
#include "vardyn/coefficients.hpp"
#include "vardyn/config.hpp"
#include "vardyn/ensemble.hpp"
#include "vardyn/evolution.hpp"
#include "vardyn/metrics.hpp"

namespace vardyn {

/// How the single variational trajectory is tied to the disordered ensemble.
///   MeanHamiltonian: one run driven by location * G + B.
///   PerRealizationAverage: one run per quadrature node of p(alpha), states
///   averaged with the node weights.
enum class ComparisonMode { MeanHamiltonian, PerRealizationAverage };

/// Ensemble: rho_bar from the closed-form ensemble average.
/// Master: rho_bar from the dephasing master equation with A = G and the
/// distribution of 2 alpha (needs an empty base).
enum class ReferenceKind { Ensemble, Master };

struct ExperimentConfig {
  std::string name = "custom";
  int n_qubits = 0;
  std::vector<Gate> gates;
  RVector lambda0;
  CVector state;  // initial pure state amplitudes
  std::string state_label;
  DisorderDistribution distribution = DisorderDistribution::gaussian(0.0, 1.0);
  PauliSum generator;
  PauliSum base;
  std::optional<PauliSum> hamiltonian;  // overrides the mean Hamiltonian as the drive
  ComparisonMode comparison = ComparisonMode::MeanHamiltonian;
  ReferenceKind reference = ReferenceKind::Ensemble;
  int realizations = 16;
  SolverConfig solver;
  EstimatorConfig estimator;
  bool seed_given = false;
  std::string output;
  std::string diagnostics;
};

/// Two-qubit Ising: gates e^{i l_ZZ ZZ} e^{i l_X XI} in that order, |++>,
/// alpha ZZ with Gaussian(0, 1), initial (l_ZZ, l_X) = (0.1, 0).
ExperimentConfig ising2q_preset();
/// Open Heisenberg chain: gates e^{i l2 H_z} e^{i l1 H_xy}, H_alpha = alpha H_z + H_xy
/// with J_z ~ Gaussian(1, 1), initial (0.1, 0.1). N = 2 starts from phi0,
/// longer chains from |+...+>.
ExperimentConfig heisenberg_preset(int chain_length = 2);

/// Builds a config from parsed text. `experiment = "ising2q" | "heisenberg"`
/// starts from the preset; other keys override.
ExperimentConfig experiment_from_table(const config::Table& table);
/// `{ kind = "gaussian"|"cauchy"|"discrete", alpha0 = .., gamma = .., points = [[p, a], ...] }`.
DisorderDistribution parse_distribution(const config::Value& v);
/// Config error on inconsistent fields.
void check(const ExperimentConfig& cfg);

HamiltonianEnsemble make_ensemble(const ExperimentConfig& cfg);
PauliSum drive_hamiltonian(const ExperimentConfig& cfg);
DensityMatrix initial_state(const ExperimentConfig& cfg);

struct ResultRow {
  double t = 0.0;
  RVector lambda;
  MetricSample metrics;
  double residual = 0.0;
  Eigen::Index effective_rank = 0;
};

struct DiagnosticsRow {
  std::size_t step = 0;
  double t = 0.0;
  double condition = 0.0;
  double residual = 0.0;
  double relative_residual = 0.0;  // residual / ||V|| (0 when V = 0)
  double v_norm = 0.0;
  Eigen::Index effective_rank = 0;
  double imag_residual = 0.0;
  std::string status;  // ok | rank_deficient | zero_flow
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<DiagnosticsRow> diagnostics;
  std::vector<DensityMatrix> variational;
  std::vector<DensityMatrix> reference;
};

/// Per-line callbacks for streaming output; each receives a full line
/// without the trailing newline.
struct RunSinks {
  std::function<void(const std::string&)> csv;
  std::function<void(const std::string&)> diagnostics;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunSinks& sinks = {});

std::string csv_header(Eigen::Index n_params);
std::string csv_line(const ResultRow& row);
std::string diagnostics_header();
std::string diagnostics_line(const DiagnosticsRow& row);
DiagnosticsRow make_diagnostics(std::size_t step, double t, const StepRecord& rec, Eigen::Index n_params);

/// Whole-run CSV text (header plus rows), newline terminated.
std::string render_csv(const ExperimentResult& result, Eigen::Index n_params);

struct PhiRow {
  double t = 0.0;
  Complex phi;
  double eta = 0.0;
  double xi = 0.0;
  std::string status;  // ok | singular
};

/// phi, eta and xi on 0, dt, ..., t_max. Singular rows stay with NaN eta/xi.
std::vector<PhiRow> phi_table(const DisorderDistribution& d, double t_max, double dt,
                              DerivativeMode mode = DerivativeMode::Analytic);
std::string render_phi_csv(const std::vector<PhiRow>& rows);

}  // namespace vardyn
