#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "helpers.hpp"
#include "twistlab/geometry.hpp"
#include "twistlab/quantum.hpp"

using namespace twistlab;
using namespace twistlab::testing;

TEST_CASE("exact matrix algebra") {
  CMatrix X = parse_pauli_word("X", 1).matrix();
  CMatrix Y = parse_pauli_word("Y", 1).matrix();
  CMatrix Z = parse_pauli_word("Z", 1).matrix();
  CHECK(X * X == CMatrix::identity(2));
  CHECK_FALSE(commute(X, Z));
  CHECK(commute(kron(X, X), kron(Z, Z)));
  CHECK(is_hermitian(Y));
  CHECK(trace(kron(X, Z)) == CRat(Rational(0)));

  SUBCASE("psd detection") {
    CHECK(is_psd(CMatrix::identity(4)));
    CHECK_FALSE(is_psd(Z));  // eigenvalue -1
    CHECK(is_psd(scale(CRat(Rational(1, 2)),
                       CMatrix::identity(2) + X)));  // projector
    CMatrix nonherm = CMatrix::zero(2);
    nonherm.at(0, 1) = CRat(Rational(1));
    CHECK_FALSE(is_psd(nonherm));
  }

  SUBCASE("pauli word parsing") {
    PauliWord w = parse_pauli_word("-Z⊗X", 2);
    CHECK(w.negative);
    CHECK(w.letters == "ZX");
    CHECK(parse_pauli_word("ZX", 2).matrix() == kron(
              parse_pauli_word("Z", 1).matrix(), parse_pauli_word("X", 1).matrix()));
    CHECK_THROWS(parse_pauli_word("ZQ", 2));
    CHECK_THROWS(parse_pauli_word("Z", 2));
  }
}

TEST_CASE("states") {
  QuantumState mm = maximally_mixed(2);
  CHECK(trace(mm.rho) == CRat(Rational(1)));
  CHECK(is_psd(mm.rho));

  QuantumState bell = stabilizer_state({"+XX", "+ZZ"}, 2);
  CHECK(trace(bell.rho) == CRat(Rational(1)));
  CHECK(bell.rho * bell.rho == bell.rho);  // pure

  CHECK_THROWS(stabilizer_state({"+XX"}, 2));           // wrong count
  CHECK_THROWS(stabilizer_state({"+XX", "+ZX"}, 2));    // anticommuting
  CHECK_THROWS(stabilizer_state({"+XX", "-XX"}, 2));    // -identity in group
  CHECK_THROWS(stabilizer_state({"+XX", "+XX"}, 2));    // dependent
  CHECK_THROWS(stabilizer_state({"+II", "+ZZ"}, 2));    // identity generator

  SUBCASE("matrix states are validated") {
    CMatrix bad = CMatrix::identity(4);  // trace 4
    CHECK_THROWS(state_from_matrix(bad, "bad"));
    CHECK_NOTHROW(state_from_matrix(scale(CRat(Rational(1, 4)), bad), "ok"));
  }

  SUBCASE("the shipped list contains every 2-qubit stabilizer state") {
    auto states = enumerate_stabilizer_states(2);
    CHECK(states.size() == 60);
    std::ifstream in(data_path("states2q.txt"));
    REQUIRE(in);
    std::vector<std::vector<std::string>> shipped;
    std::string a, b;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream is(line);
      is >> a >> b;
      shipped.push_back({a, b});
    }
    CHECK(shipped == states);
  }
}

TEST_CASE("context cocycles") {
  auto s = load_mermin();
  const PauliAssignment& A = s.paulis.at("mermin");

  SUBCASE("the Mermin assignment reproduces beta on the nose") {
    Cochain eps = context_cocycle(A);
    CHECK(eps == s.cochain("beta"));
  }

  SUBCASE("the all-identity assignment gives the zero cocycle") {
    PauliAssignment id = A;
    for (auto& w : id.on_edge) w = parse_pauli_word("II", 2);
    CHECK(context_cocycle(id).is_zero());
  }

  SUBCASE("non-commuting contexts are refused") {
    PauliAssignment bad = A;
    bad.qubits = 1;
    for (auto& w : bad.on_edge) w = parse_pauli_word("X", 1);
    bad.on_edge[s.space->find(1, "f")->index] = parse_pauli_word("X", 1);
    bad.on_edge[s.space->find(1, "h")->index] = parse_pauli_word("Z", 1);
    CHECK_THROWS_WITH_AS(context_cocycle(bad), doctest::Contains("non-commuting"),
                         std::runtime_error);
  }

  SUBCASE("a context product that is not +/- identity is refused") {
    PauliAssignment bad = A;
    bad.on_edge[s.space->find(1, "h")->index] = parse_pauli_word("ZX", 2);
    CHECK_THROWS(context_cocycle(bad));
  }
}

TEST_CASE("born distributions") {
  auto s = load_mermin();
  const PauliAssignment& A = s.paulis.at("mermin");

  SUBCASE("the maximally mixed state is uniform") {
    TwistedDistribution p = born_distribution(A, maximally_mixed(2));
    for (int i = 0; i < s.space->count(2); ++i)
      for (const auto& w : p.at(SimplexId{2, i}).w) CHECK(w == Rational(1, 4));
    CHECK(validate(p).ok);
  }

  SUBCASE("every shipped stabilizer state validates exactly") {
    for (const auto& gens : enumerate_stabilizer_states(2)) {
      TwistedDistribution p = born_distribution(A, stabilizer_state(gens, 2));
      CHECK(validate(p).ok);
    }
  }

  SUBCASE("born points are contextual on the twisted Mermin polytope") {
    TwistedDistribution p = born_distribution(A, stabilizer_state({"+XX", "+ZZ"}, 2));
    ContextualityVerdict v = is_noncontextual(p);
    CHECK_FALSE(v.certificate);
    CHECK(v.reason == "no sections");
  }

  SUBCASE("born points satisfy the polytope equalities") {
    PolytopeH P = build_hrep(s.twisting("beta"));
    for (const auto& gens :
         {std::vector<std::string>{"+XY", "+YX"}, {"-ZX", "-XZ"}}) {
      TwistedDistribution p = born_distribution(A, stabilizer_state(gens, 2));
      RatVec x = vectorize(P, p);
      for (size_t r = 0; r < P.A.size(); ++r) CHECK(dot(P.A[r], x) == P.b[r]);
    }
  }
}

TEST_CASE("equivariance of the Born rule") {
  auto s = load_mermin();
  const PauliAssignment& A = s.paulis.at("mermin");
  CHECK(equivariance_check(A, maximally_mixed(2)).ok);
  CHECK(equivariance_check(A, stabilizer_state({"+XX", "+ZZ"}, 2)).ok);
  // Mixtures keep equivariance by linearity.
  QuantumState mix{scale(CRat(Rational(1, 2)),
                         stabilizer_state({"+XX", "+ZZ"}, 2).rho) +
                       scale(CRat(Rational(1, 2)),
                             stabilizer_state({"+ZI", "+IZ"}, 2).rho),
                   "mixture"};
  CHECK(equivariance_check(A, mix).ok);
}
