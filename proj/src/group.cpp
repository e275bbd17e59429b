#include "twistlab/group.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace twistlab {

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<int> moduli)
    : moduli_(std::move(moduli)) {
  for (size_t i = 0; i < moduli_.size(); ++i) {
    if (moduli_[i] < 2) throw std::invalid_argument("group modulus must be >= 2");
    if (i > 0 && moduli_[i] % moduli_[i - 1] != 0)
      throw std::invalid_argument(
          "moduli must form an invariant-factor chain d1 | d2 | ...");
  }
}

FiniteAbelianGroup FiniteAbelianGroup::parse_spec(const std::string& spec) {
  std::vector<int> mods;
  std::string s = spec;
  size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] != 'Z' && s[pos] != 'z')
      throw std::runtime_error("bad group spec: " + spec);
    ++pos;
    size_t end = pos;
    while (end < s.size() && isdigit(static_cast<unsigned char>(s[end]))) ++end;
    if (end == pos) throw std::runtime_error("bad group spec: " + spec);
    int d = std::stoi(s.substr(pos, end - pos));
    if (d != 1) mods.push_back(d);
    pos = end;
    if (pos < s.size()) {
      if (s[pos] != 'x' && s[pos] != 'X')
        throw std::runtime_error("bad group spec: " + spec);
      ++pos;
    }
  }
  return FiniteAbelianGroup(mods);
}

std::string FiniteAbelianGroup::spec() const {
  if (moduli_.empty()) return "Z1";
  std::ostringstream os;
  for (size_t i = 0; i < moduli_.size(); ++i) {
    if (i) os << "x";
    os << "Z" << moduli_[i];
  }
  return os.str();
}

long FiniteAbelianGroup::order() const {
  long o = 1;
  for (int d : moduli_) o *= d;
  return o;
}

bool FiniteAbelianGroup::is_zero(const GroupElem& a) const {
  for (int v : a)
    if (v != 0) return false;
  return true;
}

GroupElem FiniteAbelianGroup::add(const GroupElem& a, const GroupElem& b) const {
  GroupElem c(moduli_.size());
  for (size_t i = 0; i < moduli_.size(); ++i) c[i] = (a[i] + b[i]) % moduli_[i];
  return c;
}

GroupElem FiniteAbelianGroup::sub(const GroupElem& a, const GroupElem& b) const {
  GroupElem c(moduli_.size());
  for (size_t i = 0; i < moduli_.size(); ++i)
    c[i] = ((a[i] - b[i]) % moduli_[i] + moduli_[i]) % moduli_[i];
  return c;
}

GroupElem FiniteAbelianGroup::neg(const GroupElem& a) const {
  return sub(zero(), a);
}

GroupElem FiniteAbelianGroup::reduce(const std::vector<long>& raw) const {
  GroupElem c(moduli_.size());
  for (size_t i = 0; i < moduli_.size(); ++i) {
    long m = moduli_[i];
    c[i] = static_cast<int>(((raw[i] % m) + m) % m);
  }
  return c;
}

long FiniteAbelianGroup::elem_index(const GroupElem& a) const {
  long idx = 0;
  for (size_t i = 0; i < moduli_.size(); ++i) idx = idx * moduli_[i] + a[i];
  return idx;
}

GroupElem FiniteAbelianGroup::elem_at(long idx) const {
  GroupElem a(moduli_.size());
  for (size_t i = moduli_.size(); i-- > 0;) {
    a[i] = static_cast<int>(idx % moduli_[i]);
    idx /= moduli_[i];
  }
  return a;
}

std::string FiniteAbelianGroup::elem_str(const GroupElem& a) const {
  if (a.empty()) return "0";
  std::ostringstream os;
  for (size_t i = 0; i < a.size(); ++i) {
    if (i) os << ".";
    os << a[i];
  }
  return os.str();
}

GroupElem FiniteAbelianGroup::parse_elem(const std::string& s) const {
  GroupElem a;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t dot = s.find('.', pos);
    std::string part = s.substr(pos, dot == std::string::npos ? dot : dot - pos);
    if (part.empty()) throw std::runtime_error("bad group element: " + s);
    a.push_back(std::stoi(part));
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  if (trivial() && a.size() == 1 && a[0] == 0) return zero();
  if (a.size() != moduli_.size())
    throw std::runtime_error("group element has wrong arity: " + s);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || a[i] >= moduli_[i])
      throw std::runtime_error("residue out of range in: " + s);
  }
  return a;
}

long FiniteAbelianGroup::tuple_count(int n) const {
  long c = 1;
  for (int i = 0; i < n; ++i) c *= order();
  return c;
}

long FiniteAbelianGroup::tuple_index(const NerveTuple& t) const {
  long idx = 0;
  for (const auto& e : t) idx = idx * order() + elem_index(e);
  return idx;
}

NerveTuple FiniteAbelianGroup::tuple_at(int n, long idx) const {
  NerveTuple t(n);
  for (int i = n; i-- > 0;) {
    t[i] = elem_at(idx % order());
    idx /= order();
  }
  return t;
}

NerveTuple FiniteAbelianGroup::tuple_zero(int n) const {
  return NerveTuple(n, zero());
}

NerveTuple FiniteAbelianGroup::tuple_add(const NerveTuple& a, const NerveTuple& b) const {
  NerveTuple c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = add(a[i], b[i]);
  return c;
}

NerveTuple FiniteAbelianGroup::tuple_sub(const NerveTuple& a, const NerveTuple& b) const {
  NerveTuple c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = sub(a[i], b[i]);
  return c;
}

NerveTuple FiniteAbelianGroup::tuple_neg(const NerveTuple& a) const {
  NerveTuple c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = neg(a[i]);
  return c;
}

std::string FiniteAbelianGroup::tuple_str(const NerveTuple& t) const {
  if (t.empty()) return "()";
  std::ostringstream os;
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) os << ",";
    os << elem_str(t[i]);
  }
  return os.str();
}

NerveTuple FiniteAbelianGroup::parse_tuple(const std::string& s, int n) const {
  NerveTuple t;
  if (s != "()" && !s.empty()) {
    size_t pos = 0;
    while (pos <= s.size()) {
      size_t comma = s.find(',', pos);
      std::string part =
          s.substr(pos, comma == std::string::npos ? comma : comma - pos);
      t.push_back(parse_elem(part));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (static_cast<int>(t.size()) != n)
    throw std::runtime_error("outcome tuple has wrong length: " + s);
  return t;
}

NerveTuple FiniteAbelianGroup::nerve_face(const NerveTuple& t, int i) const {
  int n = static_cast<int>(t.size());
  if (i < 0 || i > n) throw std::out_of_range("nerve face index");
  NerveTuple out;
  out.reserve(n - 1);
  if (i == 0) {
    out.assign(t.begin() + 1, t.end());
  } else if (i == n) {
    out.assign(t.begin(), t.end() - 1);
  } else {
    out.assign(t.begin(), t.begin() + i - 1);
    out.push_back(add(t[i - 1], t[i]));
    out.insert(out.end(), t.begin() + i + 1, t.end());
  }
  return out;
}

NerveTuple FiniteAbelianGroup::nerve_degeneracy(const NerveTuple& t, int j) const {
  int n = static_cast<int>(t.size());
  if (j < 0 || j > n) throw std::out_of_range("nerve degeneracy index");
  NerveTuple out;
  out.reserve(n + 1);
  out.assign(t.begin(), t.begin() + j);
  out.push_back(zero());
  out.insert(out.end(), t.begin() + j, t.end());
  return out;
}

Presentation::Key nerve_tuple_to_key(const NerveTuple& t) {
  Presentation::Key k;
  for (const auto& e : t)
    for (int r : e) k.push_back(r);
  return k;
}

NerveTuple nerve_key_to_tuple(const FiniteAbelianGroup& H, int dim,
                              const Presentation::Key& key) {
  NerveTuple t(dim, H.zero());
  size_t pos = 0;
  for (int i = 0; i < dim; ++i)
    for (int r = 0; r < H.rank(); ++r) t[i][r] = static_cast<int>(key[pos++]);
  return t;
}

BuiltComplex nerve(const FiniteAbelianGroup& H, int max_dim) {
  Presentation p;
  p.max_dim = max_dim;
  p.simplices = [H](int d) {
    std::vector<Presentation::Key> out;
    long total = H.tuple_count(d);
    out.reserve(total);
    for (long idx = 0; idx < total; ++idx)
      out.push_back(nerve_tuple_to_key(H.tuple_at(d, idx)));
    return out;
  };
  p.face = [H](int d, const Presentation::Key& k, int i) {
    return nerve_tuple_to_key(H.nerve_face(nerve_key_to_tuple(H, d, k), i));
  };
  p.degeneracy = [H](int d, const Presentation::Key& k, int j) {
    return nerve_tuple_to_key(H.nerve_degeneracy(nerve_key_to_tuple(H, d, k), j));
  };
  p.name = [H](int d, const Presentation::Key& k) {
    return "(" + H.tuple_str(nerve_key_to_tuple(H, d, k)) + ")";
  };
  return build_complex(p);
}

}  // namespace twistlab
