#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vardyn/linalg.hpp"

namespace vardyn {

inline constexpr int kDefaultMaxQubits = 10;

enum class Pauli : std::uint8_t { I, X, Y, Z };

char to_char(Pauli p) noexcept;

/// Tensor product of single-qubit Pauli operators.
///
/// Letter 0 is the leftmost (most significant) Kronecker factor, so "XZ"
/// is X (x) Z and basis index |q0 q1> = 2*q0 + q1.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<Pauli> letters);
  /// Parses "IXYZ"-style letters; throws Parameter on anything else.
  explicit PauliString(std::string_view letters);

  static PauliString identity(int n_qubits);
  /// Single non-identity letter `p` on `qubit`.
  static PauliString single(int n_qubits, int qubit, Pauli p);

  int n_qubits() const noexcept { return static_cast<int>(letters_.size()); }
  Pauli operator[](int qubit) const { return letters_.at(static_cast<std::size_t>(qubit)); }
  const std::vector<Pauli>& letters() const noexcept { return letters_; }
  bool is_identity() const noexcept;
  std::string str() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend auto operator<=>(const PauliString&, const PauliString&) = default;

 private:
  std::vector<Pauli> letters_;
};

/// Real-weighted sum of Pauli strings on a common register, kept canonical:
/// strings are unique and sorted, zero coefficients dropped.
class PauliSum {
 public:
  struct Term {
    double coeff;
    PauliString string;
  };

  PauliSum() = default;
  /// An empty sum on `n_qubits` (the zero operator).
  explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {}
  PauliSum(double coeff, PauliString string);
  explicit PauliSum(const std::vector<Term>& terms);

  int n_qubits() const noexcept { return n_qubits_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  /// Sum of |coeff|; an upper bound on the spectral radius.
  double l1_norm() const noexcept;

  PauliSum& operator+=(const PauliSum& other);
  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator*(double s, PauliSum a);

  std::string str() const;

 private:
  void add_term(double coeff, const PauliString& string);

  int n_qubits_ = 0;
  std::vector<Term> terms_;
};

/// Parses "1.0 ZZ; 0.5 XI". An empty (or all-blank) string yields the zero
/// operator on `n_qubits_hint` qubits; otherwise the register size comes
/// from the letters.
PauliSum parse_pauli_sum(std::string_view text, int n_qubits_hint = 0);

struct PauliProduct {
  Complex phase;
  PauliString product;
};

/// a*b = phase * product, phase in {1, -1, i, -i}.
PauliProduct multiply(const PauliString& a, const PauliString& b);

CMatrix dense(const PauliString& p, int max_qubits = kDefaultMaxQubits);
CMatrix dense(const PauliSum& p, int max_qubits = kDefaultMaxQubits);

/// exp(-i theta G) for a fixed Hermitian G, reusing one eigendecomposition.
class HermitianExponential {
 public:
  explicit HermitianExponential(const CMatrix& hermitian);
  explicit HermitianExponential(const PauliSum& generator, int max_qubits = kDefaultMaxQubits);

  CMatrix operator()(double theta) const;
  const RVector& eigenvalues() const noexcept { return eigenvalues_; }
  const CMatrix& eigenvectors() const noexcept { return eigenvectors_; }

 private:
  RVector eigenvalues_;
  CMatrix eigenvectors_;
};

/// exp(-i theta dense(g)).
CMatrix exponential(const PauliSum& g, double theta);

}  // namespace vardyn
