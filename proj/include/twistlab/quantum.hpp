#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twistlab/dist.hpp"
#include "twistlab/rational.hpp"

namespace twistlab {

// Complex numbers with exact rational parts. All supported inputs (Pauli
// words, stabilizer states, rational matrix files) stay in this ring, so the
// quantum backend never leaves exact arithmetic.
struct CRat {
  Rational re = 0, im = 0;

  CRat() = default;
  CRat(Rational r) : re(std::move(r)) {}
  CRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  CRat operator+(const CRat& o) const { return {re + o.re, im + o.im}; }
  CRat operator-(const CRat& o) const { return {re - o.re, im - o.im}; }
  CRat operator*(const CRat& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  CRat conj() const { return {re, -im}; }
  bool operator==(const CRat& o) const { return re == o.re && im == o.im; }
  bool is_zero() const { return re == 0 && im == 0; }
};

struct CMatrix {
  long n = 0;
  std::vector<CRat> a;

  static CMatrix zero(long n);
  static CMatrix identity(long n);
  CRat& at(long i, long j) { return a[i * n + j]; }
  const CRat& at(long i, long j) const { return a[i * n + j]; }
  bool operator==(const CMatrix& o) const { return n == o.n && a == o.a; }
};

CMatrix operator+(const CMatrix& x, const CMatrix& y);
CMatrix operator-(const CMatrix& x, const CMatrix& y);
CMatrix operator*(const CMatrix& x, const CMatrix& y);
CMatrix scale(const CRat& c, const CMatrix& x);
CMatrix kron(const CMatrix& x, const CMatrix& y);
CMatrix dagger(const CMatrix& x);
CRat trace(const CMatrix& x);

bool is_hermitian(const CMatrix& x);
// Exact positive-semidefiniteness via the characteristic polynomial
// (Faddeev-LeVerrier); requires a Hermitian input.
bool is_psd(const CMatrix& x);

// Signed n-qubit Pauli word.
struct PauliWord {
  bool negative = false;
  std::string letters;  // over {I,X,Y,Z}, one per qubit

  CMatrix matrix() const;
  std::string str() const;
};
// Accepts "+Z(x)X" in the tensor spelling with a UTF-8 tensor sign, or the
// compact "ZX"; sign optional.
PauliWord parse_pauli_word(const std::string& text, int qubits);

bool commute(const CMatrix& x, const CMatrix& y);

// Edge-indexed assignment of Pauli words on a 2-dimensional scenario.
struct PauliAssignment {
  std::shared_ptr<const SimplicialSet> space;
  int qubits = 0;
  std::vector<PauliWord> on_edge;  // by non-degenerate edge index

  const PauliWord& at_edge(int index) const { return on_edge[index]; }
};

// The sign of each context's operator product relative to its third edge:
// op(d2) op(d0) op(d1) = (-1)^eps * identity. Validates pairwise
// commutativity inside every context. Coefficients land in Z2.
Cochain context_cocycle(const PauliAssignment& A);

struct QuantumState {
  CMatrix rho;
  std::string description;
};

QuantumState maximally_mixed(int qubits);
// rho from independent commuting stabilizer generators, e.g. {"+XX","+ZZ"}.
QuantumState stabilizer_state(const std::vector<std::string>& generators,
                              int qubits);
QuantumState state_from_matrix(const CMatrix& rho, const std::string& label);
// Density-operator axioms, exactly.
void validate_state(const QuantumState& s);

// Born-rule distribution over the twisting of the assignment's context
// cocycle; the result validates exactly.
TwistedDistribution born_distribution(const PauliAssignment& A,
                                      const QuantumState& rho);

// Flipping the sign of one edge operator must shift the Born distribution by
// the convolution action of the corresponding deterministic delta; checked
// for every edge.
CheckReport equivariance_check(const PauliAssignment& A, const QuantumState& rho);

// All distinct stabilizer states on the given number of qubits, as generator
// lists (canonical, sorted). Used to ship and cross-check the state list.
std::vector<std::vector<std::string>> enumerate_stabilizer_states(int qubits);

}  // namespace twistlab
