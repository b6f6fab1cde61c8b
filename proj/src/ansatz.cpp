#include "vardyn/ansatz.hpp"

#include <string>

#include <fmt/format.h>

#include "vardyn/error.hpp"

namespace vardyn {

ParamVector::ParamVector(std::initializer_list<double> values) : values_(values.size()) {
  Eigen::Index k = 0;
  for (double v : values) values_(k++) = v;
}

AnsatzCircuit::AnsatzCircuit(std::vector<Gate> gates) : n_qubits_(0), gates_(std::move(gates)) {
  if (gates_.empty()) throw Error(ErrorKind::Parameter, "ansatz needs at least one gate");
  n_qubits_ = gates_.front().generator.n_qubits();
  for (std::size_t k = 0; k < gates_.size(); ++k) {
    const Gate& g = gates_[k];
    if (g.generator.n_qubits() != n_qubits_ || n_qubits_ <= 0) {
      throw Error(ErrorKind::Dimension, fmt::format("gate {} acts on {} qubits, expected {}", k,
                                                    g.generator.n_qubits(), n_qubits_));
    }
    if (g.sign != 1 && g.sign != -1) {
      throw Error(ErrorKind::Parameter, fmt::format("gate {} has sign {}, expected +1 or -1", k, g.sign));
    }
    const CMatrix lambda = dense(g.generator);
    exponentials_.emplace_back(lambda);
    insertions_.push_back(Complex{0.0, -static_cast<double>(g.sign)} * lambda);
  }
}

CMatrix AnsatzCircuit::gate_unitary(Eigen::Index k, double lambda) const {
  const auto idx = static_cast<std::size_t>(k);
  return exponentials_.at(idx)(static_cast<double>(gates_[idx].sign) * lambda);
}

namespace {

void check_params(const AnsatzCircuit& c, const ParamVector& lam) {
  if (lam.size() != c.n_params()) {
    throw Error(ErrorKind::Parameter,
                fmt::format("ansatz has {} parameters, got {}", c.n_params(), lam.size()));
  }
}

void check_index(const AnsatzCircuit& c, Eigen::Index k) {
  if (k < 0 || k >= c.n_params()) {
    throw Error(ErrorKind::Parameter, fmt::format("parameter index {} out of range [0, {})", k, c.n_params()));
  }
}

struct GateProducts {
  std::vector<CMatrix> gates;   // G_k
  std::vector<CMatrix> prefix;  // prefix[k] = G_0 ... G_{k-1}
  std::vector<CMatrix> suffix;  // suffix[k] = G_k ... G_{N-1}
};

GateProducts gate_products(const AnsatzCircuit& c, const ParamVector& lam) {
  check_params(c, lam);
  const auto n = static_cast<std::size_t>(c.n_params());
  GateProducts p;
  p.gates.reserve(n);
  for (std::size_t k = 0; k < n; ++k) p.gates.push_back(c.gate_unitary(static_cast<Eigen::Index>(k), lam[static_cast<Eigen::Index>(k)]));
  const CMatrix id = CMatrix::Identity(c.dim(), c.dim());
  p.prefix.assign(n + 1, id);
  p.suffix.assign(n + 1, id);
  for (std::size_t k = 0; k < n; ++k) p.prefix[k + 1] = p.prefix[k] * p.gates[k];
  for (std::size_t k = n; k-- > 0;) p.suffix[k] = p.gates[k] * p.suffix[k + 1];
  return p;
}

// G_a ... G_{b-1}
CMatrix middle(const GateProducts& p, std::size_t a, std::size_t b, Eigen::Index dim) {
  CMatrix m = CMatrix::Identity(dim, dim);
  for (std::size_t k = a; k < b; ++k) m = m * p.gates[k];
  return m;
}

CMatrix double_insertion(const AnsatzCircuit& c, const GateProducts& p, std::size_t k, std::size_t i) {
  const CMatrix& ik = c.insertion(static_cast<Eigen::Index>(k));
  if (k == i) return p.prefix[k] * (ik * ik) * p.suffix[k];
  const std::size_t a = std::min(k, i);
  const std::size_t b = std::max(k, i);
  const CMatrix& ia = c.insertion(static_cast<Eigen::Index>(a));
  const CMatrix& ib = c.insertion(static_cast<Eigen::Index>(b));
  return p.prefix[a] * ia * middle(p, a, b, c.dim()) * ib * p.suffix[b];
}

}  // namespace

CMatrix unitary(const AnsatzCircuit& c, const ParamVector& lam) {
  return gate_products(c, lam).prefix.back();
}

DensityMatrix apply(const AnsatzCircuit& c, const ParamVector& lam, const DensityMatrix& rho0) {
  if (rho0.n_qubits() != c.n_qubits()) {
    throw Error(ErrorKind::Dimension, fmt::format("state has {} qubits, ansatz acts on {}", rho0.n_qubits(), c.n_qubits()));
  }
  const CMatrix u = unitary(c, lam);
  return DensityMatrix(u * rho0.matrix() * u.adjoint());
}

CMatrix derivative(const AnsatzCircuit& c, const ParamVector& lam, Eigen::Index k) {
  check_index(c, k);
  const GateProducts p = gate_products(c, lam);
  const auto kk = static_cast<std::size_t>(k);
  return p.prefix[kk] * c.insertion(k) * p.suffix[kk];
}

CMatrix second_derivative_dagger(const AnsatzCircuit& c, const ParamVector& lam, Eigen::Index k, Eigen::Index i) {
  check_index(c, k);
  check_index(c, i);
  const GateProducts p = gate_products(c, lam);
  return double_insertion(c, p, static_cast<std::size_t>(k), static_cast<std::size_t>(i)).adjoint();
}

AnsatzJet ansatz_jet(const AnsatzCircuit& c, const ParamVector& lam) {
  const GateProducts p = gate_products(c, lam);
  const auto n = static_cast<std::size_t>(c.n_params());
  AnsatzJet jet;
  jet.u = p.prefix.back();
  jet.first.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    jet.first.push_back(p.prefix[k] * c.insertion(static_cast<Eigen::Index>(k)) * p.suffix[k]);
  }
  jet.second_dag.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = k; i < n; ++i) {
      jet.second_dag[k * n + i] = double_insertion(c, p, k, i).adjoint();
      if (i != k) jet.second_dag[i * n + k] = jet.second_dag[k * n + i];
    }
  }
  return jet;
}

}  // namespace vardyn
