#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "vardyn/error.hpp"
#include "vardyn/pauli.hpp"

using namespace vardyn;

namespace {

std::string random_letters(int n, std::mt19937_64& rng) {
  const char* alphabet = "IXYZ";
  std::uniform_int_distribution<int> pick(0, 3);
  std::string s;
  for (int k = 0; k < n; ++k) s += alphabet[pick(rng)];
  return s;
}

}  // namespace

TEST_CASE("dense Pauli strings agree with Kronecker products") {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 5; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const std::string s = random_letters(n, rng);
      CHECK(oracle::max_abs(dense(PauliString(s)) - oracle::kron_string(s)) == 0.0);
    }
  }
}

TEST_CASE("qubit 0 is the most significant factor") {
  const CMatrix xi = dense(PauliString("XI"));
  // X on the first qubit maps |00> (index 0) to |10> (index 2).
  CHECK(xi(2, 0) == Complex{1.0, 0.0});
  CHECK(xi(1, 0) == Complex{0.0, 0.0});
}

TEST_CASE("multiplication table matches dense products") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 4;
    const std::string a = random_letters(n, rng), b = random_letters(n, rng);
    const PauliProduct p = multiply(PauliString(a), PauliString(b));
    const CMatrix lhs = oracle::kron_string(a) * oracle::kron_string(b);
    CHECK(oracle::max_abs(lhs - p.phase * oracle::kron_string(p.product.str())) < 1e-15);
  }
  const PauliProduct xy = multiply(PauliString("X"), PauliString("Y"));
  CHECK(xy.phase == Complex{0.0, 1.0});
  CHECK(xy.product.str() == "Z");
}

TEST_CASE("PauliSum is canonical") {
  PauliSum s = parse_pauli_sum("0.5 XI; 1.0 ZZ; 0.5 XI; -1 ZZ");
  REQUIRE(s.terms().size() == 1);
  CHECK(s.terms()[0].string.str() == "XI");
  CHECK(s.terms()[0].coeff == doctest::Approx(1.0));
  CHECK(parse_pauli_sum("  2.5  ZX  ").str() == parse_pauli_sum("2.5 ZX").str());
  CHECK(parse_pauli_sum("ZZ").terms()[0].coeff == 1.0);
  CHECK(parse_pauli_sum("", 3).empty());
  CHECK(parse_pauli_sum("", 3).n_qubits() == 3);
  CHECK(dense(parse_pauli_sum("", 2)).isZero());
}

TEST_CASE("dense PauliSum is the weighted Kronecker sum") {
  const PauliSum s = parse_pauli_sum("1.0 ZZ; 0.5 XI; -0.25 YX");
  const CMatrix ref = oracle::kron_string("ZZ") + 0.5 * oracle::kron_string("XI") - 0.25 * oracle::kron_string("YX");
  CHECK(oracle::max_abs(dense(s) - ref) < 1e-15);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(PauliString("XQ"), Error);
  CHECK_THROWS_AS(parse_pauli_sum("1.0 ZZ; 0.5 X"), Error);
  CHECK_THROWS_AS(parse_pauli_sum("abc ZZ"), Error);
  try {
    parse_pauli_sum("1.0 ZZ; 0.5 X");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Dimension);
  }
}

TEST_CASE("capacity limit") {
  const PauliString big(std::string(11, 'Z'));
  try {
    (void)dense(big);
    FAIL("expected a capacity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Capacity);
  }
  CHECK(dense(PauliString(std::string(10, 'X'))).rows() == 1024);
}

TEST_CASE("exponential matches Pade oracle and is unitary") {
  const PauliSum g = parse_pauli_sum("1.0 ZZ; 0.7 XI; -0.3 IY");
  for (double theta : {0.0, 0.1, -1.3, 2.7}) {
    const CMatrix u = exponential(g, theta);
    CHECK(oracle::max_abs(u - oracle::expm_h(dense(g), theta)) < 1e-12);
    CHECK(unitarity_residual(u) < 1e-13);
  }
  // exp(-i theta P) = cos(theta) I - i sin(theta) P for a single string.
  const double t = 0.37;
  const CMatrix p = dense(PauliString("XZ"));
  const CMatrix closed = std::cos(t) * CMatrix::Identity(4, 4) - Complex{0.0, std::sin(t)} * p;
  CHECK(oracle::max_abs(exponential(PauliSum(1.0, PauliString("XZ")), t) - closed) < 1e-14);
}
