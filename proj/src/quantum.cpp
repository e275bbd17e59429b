#include "twistlab/quantum.hpp"

#include <algorithm>
#include <set>

#include "twistlab/bundle.hpp"

namespace twistlab {

CMatrix CMatrix::zero(long n) {
  CMatrix m;
  m.n = n;
  m.a.assign(n * n, CRat());
  return m;
}

CMatrix CMatrix::identity(long n) {
  CMatrix m = zero(n);
  for (long i = 0; i < n; ++i) m.at(i, i) = CRat(Rational(1));
  return m;
}

CMatrix operator+(const CMatrix& x, const CMatrix& y) {
  CMatrix m = x;
  for (size_t i = 0; i < m.a.size(); ++i) m.a[i] = m.a[i] + y.a[i];
  return m;
}

CMatrix operator-(const CMatrix& x, const CMatrix& y) {
  CMatrix m = x;
  for (size_t i = 0; i < m.a.size(); ++i) m.a[i] = m.a[i] - y.a[i];
  return m;
}

CMatrix operator*(const CMatrix& x, const CMatrix& y) {
  CMatrix m = CMatrix::zero(x.n);
  for (long i = 0; i < x.n; ++i)
    for (long k = 0; k < x.n; ++k) {
      if (x.at(i, k).is_zero()) continue;
      for (long j = 0; j < x.n; ++j)
        m.at(i, j) = m.at(i, j) + x.at(i, k) * y.at(k, j);
    }
  return m;
}

CMatrix scale(const CRat& c, const CMatrix& x) {
  CMatrix m = x;
  for (auto& v : m.a) v = c * v;
  return m;
}

CMatrix kron(const CMatrix& x, const CMatrix& y) {
  CMatrix m = CMatrix::zero(x.n * y.n);
  for (long i = 0; i < x.n; ++i)
    for (long j = 0; j < x.n; ++j) {
      if (x.at(i, j).is_zero()) continue;
      for (long k = 0; k < y.n; ++k)
        for (long l = 0; l < y.n; ++l)
          m.at(i * y.n + k, j * y.n + l) = x.at(i, j) * y.at(k, l);
    }
  return m;
}

CMatrix dagger(const CMatrix& x) {
  CMatrix m = CMatrix::zero(x.n);
  for (long i = 0; i < x.n; ++i)
    for (long j = 0; j < x.n; ++j) m.at(i, j) = x.at(j, i).conj();
  return m;
}

CRat trace(const CMatrix& x) {
  CRat t;
  for (long i = 0; i < x.n; ++i) t = t + x.at(i, i);
  return t;
}

bool is_hermitian(const CMatrix& x) { return dagger(x) == x; }

bool is_psd(const CMatrix& x) {
  if (!is_hermitian(x)) return false;
  // Faddeev-LeVerrier gives char(t) = t^n + c_{n-1} t^{n-1} + ... + c_0
  // exactly. Hermitian matrices have real spectra, so all eigenvalues are
  // nonnegative iff the elementary symmetric functions e_k = (-1)^k c_{n-k}
  // are all nonnegative.
  long n = x.n;
  std::vector<Rational> c(n);
  CRat t1 = trace(x);
  if (t1.im != 0) return false;
  c[n - 1] = -t1.re;
  CMatrix AM = x;
  for (long k = 2; k <= n; ++k) {
    CMatrix M = AM;
    for (long i = 0; i < n; ++i) M.at(i, i) = M.at(i, i) + CRat(c[n - k + 1]);
    AM = x * M;
    CRat tk = trace(AM);
    if (tk.im != 0) return false;
    c[n - k] = -tk.re / k;
  }
  for (long k = 1; k <= n; ++k) {
    Rational e = (k % 2 == 0) ? c[n - k] : -c[n - k];
    if (e < 0) return false;
  }
  return true;
}

namespace {

CMatrix pauli_letter(char c) {
  CMatrix m = CMatrix::zero(2);
  Rational one(1);
  switch (c) {
    case 'I':
      return CMatrix::identity(2);
    case 'X':
      m.at(0, 1) = CRat(one);
      m.at(1, 0) = CRat(one);
      return m;
    case 'Y':
      m.at(0, 1) = CRat(Rational(0), -one);
      m.at(1, 0) = CRat(Rational(0), one);
      return m;
    case 'Z':
      m.at(0, 0) = CRat(one);
      m.at(1, 1) = CRat(-one);
      return m;
    default:
      throw std::runtime_error(std::string("unknown Pauli letter: ") + c);
  }
}

}  // namespace

CMatrix PauliWord::matrix() const {
  CMatrix m = CMatrix::identity(1);
  for (char c : letters) m = kron(m, pauli_letter(c));
  if (negative) m = scale(CRat(Rational(-1)), m);
  return m;
}

std::string PauliWord::str() const {
  std::string s = negative ? "-" : "+";
  for (size_t i = 0; i < letters.size(); ++i) {
    if (i) s += "⊗";
    s += letters[i];
  }
  return s;
}

PauliWord parse_pauli_word(const std::string& text, int qubits) {
  PauliWord w;
  std::string s = text;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    w.negative = s[0] == '-';
    s = s.substr(1);
  }
  const std::string tensor = "⊗";
  size_t pos = 0;
  while (pos < s.size()) {
    char c = s[pos];
    if (c == 'I' || c == 'X' || c == 'Y' || c == 'Z') {
      w.letters += c;
      ++pos;
    } else if (s.compare(pos, tensor.size(), tensor) == 0) {
      pos += tensor.size();
    } else {
      throw std::runtime_error("bad Pauli word: " + text);
    }
  }
  if (static_cast<int>(w.letters.size()) != qubits)
    throw std::runtime_error("Pauli word '" + text + "' is not on " +
                             std::to_string(qubits) + " qubits");
  return w;
}

bool commute(const CMatrix& x, const CMatrix& y) { return x * y == y * x; }

Cochain context_cocycle(const PauliAssignment& A) {
  const auto& X = A.space;
  FiniteAbelianGroup Z2({2});
  Cochain eps(X, Z2, 2);
  long dim = 1 << A.qubits;
  CMatrix id = CMatrix::identity(dim);
  std::vector<CMatrix> mat;
  for (const auto& w : A.on_edge) mat.push_back(w.matrix());
  for (int idx = 0; idx < X->count(2); ++idx) {
    SimplexId tri{2, idx};
    std::array<const EZForm*, 3> fs = {&X->face(tri, 0), &X->face(tri, 1),
                                       &X->face(tri, 2)};
    for (const EZForm* f : fs)
      if (f->is_degenerate())
        throw std::runtime_error("context " + X->name(tri) +
                                 " has a degenerate edge; no operator there");
    const CMatrix& B = mat[fs[0]->base.index];
    const CMatrix& C = mat[fs[1]->base.index];
    const CMatrix& Aop = mat[fs[2]->base.index];
    if (!commute(Aop, B) || !commute(Aop, C) || !commute(B, C))
      throw std::runtime_error("non-commuting context " + X->name(tri));
    CMatrix prod = Aop * B * C;
    if (prod == id) {
      eps.set(tri, {0});
    } else if (prod == scale(CRat(Rational(-1)), id)) {
      eps.set(tri, {1});
    } else {
      throw std::runtime_error("operators of context " + X->name(tri) +
                               " do not multiply to +/- identity");
    }
  }
  if (!is_cocycle(eps))
    throw std::logic_error("context signs do not form a cocycle");
  return eps;
}

QuantumState maximally_mixed(int qubits) {
  long dim = 1 << qubits;
  QuantumState s;
  s.rho = scale(CRat(Rational(1, dim)), CMatrix::identity(dim));
  s.description = "maximally-mixed";
  return s;
}

QuantumState stabilizer_state(const std::vector<std::string>& generators,
                              int qubits) {
  if (static_cast<int>(generators.size()) != qubits)
    throw std::runtime_error("a pure stabilizer state on " +
                             std::to_string(qubits) + " qubits needs " +
                             std::to_string(qubits) + " generators");
  long dim = 1 << qubits;
  std::vector<CMatrix> gens;
  std::string label = "stabilizer:";
  for (size_t i = 0; i < generators.size(); ++i) {
    PauliWord w = parse_pauli_word(generators[i], qubits);
    if (w.letters == std::string(qubits, 'I'))
      throw std::runtime_error("identity is not a stabilizer generator");
    gens.push_back(w.matrix());
    if (i) label += ",";
    label += w.str();
  }
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = i + 1; j < gens.size(); ++j)
      if (!commute(gens[i], gens[j]))
        throw std::runtime_error("stabilizer generators do not commute");
  CMatrix rho = CMatrix::identity(dim);
  for (const auto& g : gens)
    rho = scale(CRat(Rational(1, 2)), rho * (CMatrix::identity(dim) + g));
  QuantumState s{rho, label};
  validate_state(s);  // catches dependent generators and -identity groups
  if (!(rho * rho == rho))
    throw std::runtime_error("stabilizer generators are not independent");
  return s;
}

QuantumState state_from_matrix(const CMatrix& rho, const std::string& label) {
  QuantumState s{rho, label};
  validate_state(s);
  return s;
}

void validate_state(const QuantumState& s) {
  if (!is_hermitian(s.rho))
    throw std::runtime_error("state '" + s.description + "' is not Hermitian");
  if (!(trace(s.rho) == CRat(Rational(1))))
    throw std::runtime_error("state '" + s.description + "' does not have trace 1");
  if (!is_psd(s.rho))
    throw std::runtime_error("state '" + s.description +
                             "' is not positive semidefinite");
}

TwistedDistribution born_distribution(const PauliAssignment& A,
                                      const QuantumState& state) {
  validate_state(state);
  const auto& X = A.space;
  if (X->max_dim() >= 3 && X->count(3) > 0)
    throw std::runtime_error("the quantum backend covers 2-dimensional scenarios");
  Cochain eps = context_cocycle(A);
  const auto& Z2 = eps.group();
  auto tw = std::make_shared<TwistingFunction>(TwistingFunction::from_cocycle(eps));
  long dim = 1 << A.qubits;
  CMatrix id = CMatrix::identity(dim);

  auto eigen_projector = [&](const CMatrix& op, int outcome) {
    CMatrix signed_op = outcome ? scale(CRat(Rational(-1)), op) : op;
    return scale(CRat(Rational(1, 2)), id + signed_op);
  };
  auto expect = [&](const CMatrix& proj) {
    CRat t = trace(state.rho * proj);
    if (!(t.im == 0))
      throw std::logic_error("Born probability came out non-real");
    return t.re;
  };

  TwistedDistribution p(tw);
  for (int e = 0; e < X->count(1); ++e) {
    CMatrix op = A.at_edge(e).matrix();
    DistributionVector v = DistributionVector::zero(2);
    for (int a = 0; a < 2; ++a) v.w[a] = expect(eigen_projector(op, a));
    p.at(SimplexId{1, e}) = std::move(v);
  }
  for (int t = 0; t < X->count(2); ++t) {
    SimplexId tri{2, t};
    CMatrix opA = A.at_edge(X->face(tri, 2).base.index).matrix();
    CMatrix opB = A.at_edge(X->face(tri, 0).base.index).matrix();
    int shift = eps.value(t)[0];
    DistributionVector v = DistributionVector::zero(4);
    CMatrix total = CMatrix::zero(dim);
    for (int h1 = 0; h1 < 2; ++h1)
      for (int h2 = 0; h2 < 2; ++h2) {
        // Fiber coordinates of the twisted product: the d0-edge outcome is
        // shifted by the context sign.
        CMatrix proj =
            eigen_projector(opA, h1) * eigen_projector(opB, (h2 + shift) % 2);
        total = total + proj;
        v.w[Z2.tuple_index({{h1}, {h2}})] = expect(proj);
      }
    if (!(total == id))
      throw std::logic_error("context projectors do not sum to the identity");
    p.at(tri) = std::move(v);
  }
  CheckReport rep = validate(p);
  if (!rep.ok)
    throw std::logic_error("Born distribution failed validation: " +
                           rep.first_violation);
  return p;
}

CheckReport equivariance_check(const PauliAssignment& A, const QuantumState& rho) {
  CheckReport rep;
  const auto& X = A.space;
  TwistedDistribution p = born_distribution(A, rho);
  FiniteAbelianGroup Z2({2});
  for (int e = 0; e < X->count(1); ++e) {
    rep.count();
    PauliAssignment flipped = A;
    flipped.on_edge[e].negative = !flipped.on_edge[e].negative;
    TwistedDistribution q = born_distribution(flipped, rho);
    Cochain chi(X, Z2, 1);
    chi.set(SimplexId{1, e}, {1});
    auto tw_shift = std::make_shared<TwistingFunction>(
        TwistingFunction::from_cocycle(coboundary(chi)));
    TwistedDistribution shifted =
        convolve(p, delta_distribution(Section(tw_shift, chi)));
    if (!(shifted.twisting()->cocycle() == q.twisting()->cocycle())) {
      rep.fail("sign flip on " + X->name(SimplexId{1, e}) +
               " changed the cocycle inconsistently");
      continue;
    }
    bool same = true;
    for (int d = 1; d <= X->max_dim() && same; ++d)
      for (int idx = 0; idx < X->count(d) && same; ++idx)
        if (!(q.at(SimplexId{d, idx}) == shifted.at(SimplexId{d, idx})))
          same = false;
    if (!same)
      rep.fail("Born probabilities do not follow the convolution action for a "
               "sign flip on " +
               X->name(SimplexId{1, e}));
  }
  return rep;
}

std::vector<std::vector<std::string>> enumerate_stabilizer_states(int qubits) {
  if (qubits != 2)
    throw std::runtime_error("stabilizer enumeration is provided for 2 qubits");
  // All signed non-identity 2-qubit Pauli words.
  std::vector<PauliWord> words;
  const std::string letters = "IXYZ";
  for (char a : letters)
    for (char b : letters) {
      if (a == 'I' && b == 'I') continue;
      for (bool neg : {false, true})
        words.push_back(PauliWord{neg, std::string{a, b}});
    }
  std::set<std::vector<std::string>> canon;
  std::vector<std::vector<std::string>> out;
  for (size_t i = 0; i < words.size(); ++i)
    for (size_t j = 0; j < words.size(); ++j) {
      if (i == j) continue;
      if (words[i].letters == words[j].letters) continue;  // dependent
      CMatrix gi = words[i].matrix(), gj = words[j].matrix();
      if (!commute(gi, gj)) continue;
      // Skip groups containing -identity (they give the zero operator).
      CMatrix prod = gi * gj;
      long dim = 4;
      if (prod == scale(CRat(Rational(-1)), CMatrix::identity(dim))) continue;
      // Canonical form: the three non-identity group elements, sorted.
      std::vector<std::string> group = {words[i].str(), words[j].str()};
      // include the product as a string for canonicalization
      // derive its word form from the matrix by scanning all words
      for (const auto& w : words)
        if (w.matrix() == prod) group.push_back(w.str());
      std::sort(group.begin(), group.end());
      if (canon.insert(group).second)
        out.push_back({words[i].str(), words[j].str()});
    }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace twistlab
