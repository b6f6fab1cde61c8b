#include "vardyn/pauli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "vardyn/error.hpp"

namespace vardyn {

char to_char(Pauli p) noexcept {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

namespace {

Pauli from_char(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default:
      throw Error(ErrorKind::Parameter, std::string("invalid Pauli letter '") + c + "'");
  }
}

void require_capacity(int n_qubits, int max_qubits) {
  if (n_qubits > max_qubits) {
    throw Error(ErrorKind::Capacity, "register of " + std::to_string(n_qubits) +
                                         " qubits exceeds the maximum of " + std::to_string(max_qubits));
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

PauliString::PauliString(std::vector<Pauli> letters) : letters_(std::move(letters)) {
  if (letters_.empty()) throw Error(ErrorKind::Parameter, "Pauli string needs at least one qubit");
}

PauliString::PauliString(std::string_view letters) {
  letters = trim(letters);
  if (letters.empty()) throw Error(ErrorKind::Parameter, "Pauli string needs at least one qubit");
  letters_.reserve(letters.size());
  for (char c : letters) letters_.push_back(from_char(c));
}

PauliString PauliString::identity(int n_qubits) {
  return PauliString(std::vector<Pauli>(static_cast<std::size_t>(n_qubits), Pauli::I));
}

PauliString PauliString::single(int n_qubits, int qubit, Pauli p) {
  if (qubit < 0 || qubit >= n_qubits) throw Error(ErrorKind::Parameter, "qubit index out of range");
  std::vector<Pauli> letters(static_cast<std::size_t>(n_qubits), Pauli::I);
  letters[static_cast<std::size_t>(qubit)] = p;
  return PauliString(std::move(letters));
}

bool PauliString::is_identity() const noexcept {
  return std::all_of(letters_.begin(), letters_.end(), [](Pauli p) { return p == Pauli::I; });
}

std::string PauliString::str() const {
  std::string s;
  s.reserve(letters_.size());
  for (Pauli p : letters_) s.push_back(to_char(p));
  return s;
}

PauliSum::PauliSum(double coeff, PauliString string) : n_qubits_(string.n_qubits()) {
  add_term(coeff, string);
}

PauliSum::PauliSum(const std::vector<Term>& terms) {
  if (terms.empty()) throw Error(ErrorKind::Parameter, "cannot infer register size of an empty term list");
  n_qubits_ = terms.front().string.n_qubits();
  for (const auto& t : terms) add_term(t.coeff, t.string);
}

void PauliSum::add_term(double coeff, const PauliString& string) {
  if (string.n_qubits() != n_qubits_) {
    throw Error(ErrorKind::Dimension, "Pauli term " + string.str() + " does not act on " +
                                          std::to_string(n_qubits_) + " qubits");
  }
  if (!std::isfinite(coeff)) throw Error(ErrorKind::Parameter, "non-finite Pauli coefficient");
  auto it = std::lower_bound(terms_.begin(), terms_.end(), string,
                             [](const Term& t, const PauliString& s) { return t.string < s; });
  if (it != terms_.end() && it->string == string) {
    it->coeff += coeff;
    if (it->coeff == 0.0) terms_.erase(it);
  } else if (coeff != 0.0) {
    terms_.insert(it, Term{coeff, string});
  }
}

double PauliSum::l1_norm() const noexcept {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  if (n_qubits_ == 0 && terms_.empty()) n_qubits_ = other.n_qubits_;
  if (other.n_qubits_ != n_qubits_ && !other.terms_.empty()) {
    throw Error(ErrorKind::Dimension, "adding Pauli sums on different registers");
  }
  for (const auto& t : other.terms_) add_term(t.coeff, t.string);
  return *this;
}

PauliSum operator*(double s, PauliSum a) {
  PauliSum out(a.n_qubits());
  for (const auto& t : a.terms()) out.add_term(s * t.coeff, t.string);
  return out;
}

std::string PauliSum::str() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    if (k) os << "; ";
    os << terms_[k].coeff << ' ' << terms_[k].string.str();
  }
  return os.str();
}

PauliSum parse_pauli_sum(std::string_view text, int n_qubits_hint) {
  std::vector<PauliSum::Term> terms;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(';', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (item.empty()) continue;

    std::size_t split = item.find_last_of(" \t");
    double coeff = 1.0;
    std::string_view letters = item;
    if (split != std::string_view::npos) {
      std::string number(trim(item.substr(0, split)));
      letters = trim(item.substr(split + 1));
      char* parsed_end = nullptr;
      coeff = std::strtod(number.c_str(), &parsed_end);
      if (number.empty() || parsed_end != number.c_str() + number.size()) {
        throw Error(ErrorKind::Parameter, "invalid coefficient '" + number + "' in Pauli term '" +
                                              std::string(item) + "'");
      }
    }
    terms.push_back({coeff, PauliString(letters)});
  }
  if (terms.empty()) return PauliSum(n_qubits_hint);
  return PauliSum(terms);
}

PauliProduct multiply(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw Error(ErrorKind::Dimension, "multiplying Pauli strings " + a.str() + " and " + b.str());
  }
  // Phase tracked as a power of i.
  int ipow = 0;
  std::vector<Pauli> out(static_cast<std::size_t>(a.n_qubits()));
  for (int q = 0; q < a.n_qubits(); ++q) {
    const Pauli x = a[q];
    const Pauli y = b[q];
    Pauli r;
    if (x == Pauli::I) {
      r = y;
    } else if (y == Pauli::I) {
      r = x;
    } else if (x == y) {
      r = Pauli::I;
    } else {
      // X,Y,Z cyclic: XY = iZ, YZ = iX, ZX = iY; anticyclic gives -i.
      const int xi = static_cast<int>(x) - 1;
      const int yi = static_cast<int>(y) - 1;
      const int ri = 3 - xi - yi;
      r = static_cast<Pauli>(ri + 1);
      ipow += ((yi - xi + 3) % 3 == 1) ? 1 : 3;
    }
    out[static_cast<std::size_t>(q)] = r;
  }
  static constexpr Complex kPowers[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return {kPowers[ipow % 4], PauliString(std::move(out))};
}

CMatrix dense(const PauliString& p, int max_qubits) {
  const int n = p.n_qubits();
  require_capacity(n, max_qubits);
  const Eigen::Index dim = Eigen::Index{1} << n;
  // One nonzero per row: column = row ^ xmask, value from the Y/Z letters.
  std::uint64_t xmask = 0;
  for (int q = 0; q < n; ++q) {
    if (p[q] == Pauli::X || p[q] == Pauli::Y) xmask |= std::uint64_t{1} << (n - 1 - q);
  }
  CMatrix m = CMatrix::Zero(dim, dim);
  for (Eigen::Index row = 0; row < dim; ++row) {
    Complex value{1.0, 0.0};
    for (int q = 0; q < n; ++q) {
      const bool bit = (static_cast<std::uint64_t>(row) >> (n - 1 - q)) & 1u;
      switch (p[q]) {
        case Pauli::Y: value *= bit ? Complex{0, 1} : Complex{0, -1}; break;
        case Pauli::Z: if (bit) value = -value; break;
        default: break;
      }
    }
    m(row, static_cast<Eigen::Index>(static_cast<std::uint64_t>(row) ^ xmask)) = value;
  }
  return m;
}

CMatrix dense(const PauliSum& p, int max_qubits) {
  require_capacity(p.n_qubits(), max_qubits);
  if (p.n_qubits() <= 0) throw Error(ErrorKind::Parameter, "Pauli sum has no register");
  const Eigen::Index dim = Eigen::Index{1} << p.n_qubits();
  CMatrix m = CMatrix::Zero(dim, dim);
  for (const auto& t : p.terms()) m += t.coeff * dense(t.string, max_qubits);
  return m;
}

HermitianExponential::HermitianExponential(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::Numeric, "eigendecomposition failed");
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

HermitianExponential::HermitianExponential(const PauliSum& generator, int max_qubits)
    : HermitianExponential(dense(generator, max_qubits)) {}

CMatrix HermitianExponential::operator()(double theta) const {
  CVector phases(eigenvalues_.size());
  for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) {
    phases(k) = std::exp(Complex{0.0, -theta * eigenvalues_(k)});
  }
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

CMatrix exponential(const PauliSum& g, double theta) {
  return HermitianExponential(g)(theta);
}

}  // namespace vardyn
