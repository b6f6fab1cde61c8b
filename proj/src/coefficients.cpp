#include "vardyn/coefficients.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "vardyn/error.hpp"

namespace vardyn {

namespace {

void check_inputs(const AnsatzCircuit& c, const ParamVector& lam, const DensityMatrix& rho0, const PauliSum& h) {
  if (lam.size() != c.n_params()) {
    throw Error(ErrorKind::Parameter, fmt::format("ansatz has {} parameters, got {}", c.n_params(), lam.size()));
  }
  if (rho0.n_qubits() != c.n_qubits()) {
    throw Error(ErrorKind::Dimension,
                fmt::format("initial state has {} qubits, ansatz acts on {}", rho0.n_qubits(), c.n_qubits()));
  }
  if (!h.empty() && h.n_qubits() != c.n_qubits()) {
    throw Error(ErrorKind::Dimension,
                fmt::format("Hamiltonian acts on {} qubits, ansatz on {}", h.n_qubits(), c.n_qubits()));
  }
}

CMatrix hamiltonian_matrix(const AnsatzCircuit& c, const PauliSum& h) {
  if (h.empty()) return CMatrix::Zero(c.dim(), c.dim());
  return dense(h);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Ancilla (x) system state as a 2x2 grid of system blocks: sum_ab |a><b| (x) R[a][b].
struct AncillaState {
  std::array<std::array<CMatrix, 2>, 2> r;

  void hadamard() {
    const CMatrix s00 = r[0][0], s01 = r[0][1], s10 = r[1][0], s11 = r[1][1];
    r[0][0] = 0.5 * (s00 + s01 + s10 + s11);
    r[0][1] = 0.5 * (s00 - s01 + s10 - s11);
    r[1][0] = 0.5 * (s00 + s01 - s10 - s11);
    r[1][1] = 0.5 * (s00 - s01 - s10 + s11);
  }

  // diag(1, -i) on the ancilla.
  void s_dagger() {
    r[0][1] *= Complex{0.0, 1.0};
    r[1][0] *= Complex{0.0, -1.0};
  }

  void system(const CMatrix& l) {
    for (auto& row : r) {
      for (auto& block : row) block = l * block * l.adjoint();
    }
  }

  void controlled(const CMatrix& p, int branch) {
    const auto b = static_cast<std::size_t>(branch);
    const auto o = 1 - b;
    r[b][b] = p * r[b][b] * p.adjoint();
    r[b][o] = p * r[b][o];
    r[o][b] = r[o][b] * p.adjoint();
  }

  double probability_zero() const { return r[0][0].trace().real(); }
};

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(seed);
  for (std::uint64_t p : path) s = splitmix64(s ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

Complex lagrangian(const AnsatzCircuit& c, const ParamVector& lam, const RVector& lam_dot, const DensityMatrix& rho0,
                   const PauliSum& h) {
  check_inputs(c, lam, rho0, h);
  if (lam_dot.size() != c.n_params()) throw Error(ErrorKind::Dimension, "lambda_dot length mismatch");
  const AnsatzJet jet = ansatz_jet(c, lam);
  CMatrix u_dot_dag = CMatrix::Zero(c.dim(), c.dim());
  for (Eigen::Index i = 0; i < c.n_params(); ++i) {
    u_dot_dag += lam_dot(i) * jet.first[static_cast<std::size_t>(i)].adjoint();
  }
  const CMatrix urho = jet.u * rho0.matrix();
  const CMatrix hm = hamiltonian_matrix(c, h);
  return kI * (urho * u_dot_dag).trace() - (urho * jet.u.adjoint() * hm).trace();
}

CoefficientSet exact_coefficients(const AnsatzCircuit& c, const ParamVector& lam, const DensityMatrix& rho0,
                                  const PauliSum& h) {
  check_inputs(c, lam, rho0, h);
  const AnsatzJet jet = ansatz_jet(c, lam);
  const auto n = static_cast<std::size_t>(c.n_params());
  const CMatrix& rho = rho0.matrix();
  const CMatrix hm = hamiltonian_matrix(c, h);
  const CMatrix urho = jet.u * rho;

  CoefficientSet out;
  out.mode = EstimatorMode::Exact;
  out.m.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  out.v.resize(static_cast<Eigen::Index>(n));
  double residual = 0.0;

  for (std::size_t k = 0; k < n; ++k) {
    const CMatrix dk_rho = jet.first[k] * rho;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex t = (dk_rho * jet.first[i].adjoint()).trace() + (urho * jet.second_dag[k * n + i]).trace();
      const Complex x = kI * t;
      // i*t is itself real (derivative of a real momentum); its imaginary part
      // is the consistency residual, the "+ c.c." only doubles the real part.
      residual = std::max(residual, std::abs(x.imag()));
      out.m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = (x + std::conj(x)).real();
    }
    const CMatrix a = dk_rho * jet.u.adjoint() * hm;
    const Complex vk = (a + a.adjoint()).trace();
    residual = std::max(residual, std::abs(vk.imag()));
    out.v(static_cast<Eigen::Index>(k)) = vk.real();
  }
  out.imag_residual = residual;
  if (!out.m.allFinite() || !out.v.allFinite()) throw Error(ErrorKind::Numeric, "non-finite coefficient");
  if (residual > kImagResidualLimit) {
    throw Error(ErrorKind::Consistency,
                fmt::format("imaginary residue {:.3g} of M/V exceeds {:.1g}", residual, kImagResidualLimit));
  }
  return out;
}

TraceEstimate hadamard_test(const DensityMatrix& rho_in, const HadamardCircuit& circuit, TracePart part,
                            const EstimatorConfig& cfg) {
  if (circuit.insertions.size() > 2) {
    throw Error(ErrorKind::Parameter,
                fmt::format("Hadamard test supports at most two insertions, got {}", circuit.insertions.size()));
  }
  const Eigen::Index dim = rho_in.dim();
  for (const auto& l : circuit.layers) {
    if (l.rows() != dim || l.cols() != dim) throw Error(ErrorKind::Dimension, "layer does not match the register");
  }
  for (const auto& ins : circuit.insertions) {
    if (ins.pauli.n_qubits() != rho_in.n_qubits()) throw Error(ErrorKind::Dimension, "insertion does not match the register");
    if (ins.slot > circuit.layers.size()) throw Error(ErrorKind::Parameter, "insertion slot out of range");
    if (ins.branch != 0 && ins.branch != 1) throw Error(ErrorKind::Parameter, "insertion branch must be 0 or 1");
  }
  if (cfg.shots < 1) throw Error(ErrorKind::Config, "shots must be >= 1");

  AncillaState st;
  st.r[0][0] = rho_in.matrix();
  st.r[0][1] = st.r[1][0] = st.r[1][1] = CMatrix::Zero(dim, dim);
  st.hadamard();

  // Ket order: rightmost slot first. Within a slot the last listed acts first.
  for (std::size_t slot = circuit.layers.size() + 1; slot-- > 0;) {
    for (auto it = circuit.insertions.rbegin(); it != circuit.insertions.rend(); ++it) {
      if (it->slot == slot) st.controlled(dense(it->pauli), it->branch);
    }
    if (slot > 0) st.system(circuit.layers[slot - 1]);
  }

  if (part == TracePart::Imaginary) st.s_dagger();
  st.hadamard();

  TraceEstimate est;
  est.probability_zero = std::clamp(st.probability_zero(), 0.0, 1.0);
  if (cfg.mode == EstimatorMode::Exact) {
    est.value = 2.0 * st.probability_zero() - 1.0;
    est.std_error = 0.0;
    return est;
  }
  std::mt19937_64 rng(cfg.seed);
  std::binomial_distribution<std::uint64_t> draw(cfg.shots, est.probability_zero);
  const std::uint64_t zeros = draw(rng);
  const double n = static_cast<double>(cfg.shots);
  est.value = 2.0 * static_cast<double>(zeros) / n - 1.0;
  // Error bar from the smoothed sample proportion so that all-0 / all-1 runs
  // still report a nonzero uncertainty.
  const double p = (static_cast<double>(zeros) + 0.5) / (n + 1.0);
  est.std_error = 2.0 * std::sqrt(p * (1.0 - p) / n);
  return est;
}

CoefficientSet sampled_coefficients(const AnsatzCircuit& c, const ParamVector& lam, const DensityMatrix& rho0,
                                    const PauliSum& h, const EstimatorConfig& cfg) {
  check_inputs(c, lam, rho0, h);
  if (cfg.mode == EstimatorMode::Sampled && cfg.shots < 10) {
    throw Error(ErrorKind::Config, fmt::format("{} shots are too few to form estimates (need >= 10)", cfg.shots));
  }
  const auto n = static_cast<std::size_t>(c.n_params());

  HadamardCircuit base;
  for (std::size_t k = 0; k < n; ++k) base.layers.push_back(c.gate_unitary(static_cast<Eigen::Index>(k), lam[static_cast<Eigen::Index>(k)]));

  auto estimate_im = [&](std::vector<ControlledInsertion> insertions, std::initializer_list<std::uint64_t> path) {
    HadamardCircuit circ{base.layers, std::move(insertions)};
    EstimatorConfig sub = cfg;
    sub.seed = derive_seed(cfg.seed, path);
    return hadamard_test(rho0, circ, TracePart::Imaginary, sub);
  };

  CoefficientSet out;
  out.mode = cfg.mode;
  out.m = RMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  out.v = RVector::Zero(static_cast<Eigen::Index>(n));
  RMatrix m_var = RMatrix::Zero(out.m.rows(), out.m.cols());
  RVector v_var = RVector::Zero(out.v.size());

  constexpr std::uint64_t kTagM1 = 1, kTagM2 = 2, kTagV = 3;

  for (std::size_t k = 0; k < n; ++k) {
    const auto& gk = c.gates()[k];
    const auto& terms_k = gk.generator.terms();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& gi = c.gates()[i];
      const auto& terms_i = gi.generator.terms();
      const double sign = static_cast<double>(gk.sign * gi.sign);
      double acc = 0.0;
      double var = 0.0;
      for (std::size_t j = 0; j < terms_k.size(); ++j) {
        for (std::size_t l = 0; l < terms_i.size(); ++l) {
          const double w = terms_k[j].coeff * terms_i[l].coeff;
          const std::uint64_t term = j * terms_i.size() + l;
          // Tr[A rho0 B^dagger]: A has sigma_kj at gate k, B has sigma_il at gate i.
          const TraceEstimate z1 = estimate_im({{k, terms_k[j].string, 1}, {i, terms_i[l].string, 0}},
                                               {kTagM1, k, i, term});
          // Tr[U rho0 C^dagger]: C carries both insertions.
          std::vector<ControlledInsertion> both;
          if (k <= i) {
            both = {{k, terms_k[j].string, 0}, {i, terms_i[l].string, 0}};
          } else {
            both = {{i, terms_i[l].string, 0}, {k, terms_k[j].string, 0}};
          }
          const TraceEstimate z2 = estimate_im(std::move(both), {kTagM2, k, i, term});
          acc += w * (z1.value - z2.value);
          var += w * w * (z1.std_error * z1.std_error + z2.std_error * z2.std_error);
        }
      }
      out.m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = -2.0 * sign * acc;
      m_var(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = 4.0 * var;
    }

    double acc = 0.0;
    double var = 0.0;
    for (std::size_t j = 0; j < terms_k.size(); ++j) {
      for (std::size_t hterm = 0; hterm < h.terms().size(); ++hterm) {
        const auto& ht = h.terms()[hterm];
        const double w = terms_k[j].coeff * ht.coeff;
        // Tr[P_h A rho0 U^dagger]
        const TraceEstimate z = estimate_im({{0, ht.string, 1}, {k, terms_k[j].string, 1}},
                                            {kTagV, k, j, hterm});
        acc += w * z.value;
        var += w * w * z.std_error * z.std_error;
      }
    }
    out.v(static_cast<Eigen::Index>(k)) = 2.0 * static_cast<double>(gk.sign) * acc;
    v_var(static_cast<Eigen::Index>(k)) = 4.0 * var;
  }
  out.m_stderr = m_var.cwiseSqrt();
  out.v_stderr = v_var.cwiseSqrt();
  if (!out.m.allFinite() || !out.v.allFinite()) throw Error(ErrorKind::Numeric, "non-finite coefficient estimate");
  return out;
}

}  // namespace vardyn
