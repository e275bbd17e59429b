#include "twistlab/simplicial.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>
#include <stdexcept>

namespace twistlab {

MonotoneMap MonotoneMap::identity(int n) {
  MonotoneMap m;
  m.dom = m.cod = n;
  m.values.resize(n + 1);
  for (int i = 0; i <= n; ++i) m.values[i] = i;
  return m;
}

MonotoneMap MonotoneMap::coface(int i, int n) {
  if (i < 0 || i > n) throw std::out_of_range("coface index");
  MonotoneMap m;
  m.dom = n - 1;
  m.cod = n;
  m.values.resize(n);
  for (int k = 0; k < n; ++k) m.values[k] = k < i ? k : k + 1;
  return m;
}

MonotoneMap MonotoneMap::codegeneracy(int j, int n) {
  if (j < 0 || j > n) throw std::out_of_range("codegeneracy index");
  MonotoneMap m;
  m.dom = n + 1;
  m.cod = n;
  m.values.resize(n + 2);
  for (int k = 0; k <= n + 1; ++k) m.values[k] = k <= j ? k : k - 1;
  return m;
}

bool MonotoneMap::is_identity() const {
  if (dom != cod) return false;
  for (int i = 0; i <= dom; ++i)
    if (values[i] != i) return false;
  return true;
}

bool MonotoneMap::is_injective() const {
  for (size_t i = 1; i < values.size(); ++i)
    if (values[i] == values[i - 1]) return false;
  return true;
}

bool MonotoneMap::is_surjective() const {
  if (values.empty() || values.front() != 0 || values.back() != cod) return false;
  for (size_t i = 1; i < values.size(); ++i)
    if (values[i] - values[i - 1] > 1) return false;
  return true;
}

MonotoneMap compose(const MonotoneMap& f, const MonotoneMap& g) {
  if (g.cod != f.dom) throw std::logic_error("monotone map composition mismatch");
  MonotoneMap m;
  m.dom = g.dom;
  m.cod = f.cod;
  m.values.resize(g.dom + 1);
  for (int i = 0; i <= g.dom; ++i) m.values[i] = f.values[g.values[i]];
  return m;
}

EpiMono epi_mono_factor(const MonotoneMap& u) {
  // Image values, in order, define the mono; positions define the epi.
  std::vector<int> image;
  for (int v : u.values)
    if (image.empty() || image.back() != v) image.push_back(v);
  int mid = static_cast<int>(image.size()) - 1;
  EpiMono r;
  r.delta.dom = mid;
  r.delta.cod = u.cod;
  r.delta.values = image;
  r.sigma.dom = u.dom;
  r.sigma.cod = mid;
  r.sigma.values.resize(u.dom + 1);
  int pos = 0;
  for (int i = 0; i <= u.dom; ++i) {
    while (image[pos] != u.values[i]) ++pos;
    r.sigma.values[i] = pos;
  }
  return r;
}

std::vector<int> collapsed_positions(const MonotoneMap& surj) {
  std::vector<int> out;
  for (int i = 0; i < surj.dom; ++i)
    if (surj.values[i] == surj.values[i + 1]) out.push_back(i);
  return out;
}

MonotoneMap EZForm::surjection() const {
  MonotoneMap m;
  m.dom = dim();
  m.cod = base.dim;
  m.values.resize(m.dom + 1);
  size_t next = 0;
  int v = 0;
  for (int i = 0; i <= m.dom; ++i) {
    m.values[i] = v;
    if (next < degens.size() && degens[next] == i)
      ++next;  // position i is collapsed onto i+1
    else
      ++v;
  }
  return m;
}

SimplicialSet::SimplicialSet(int max_dim,
                             std::vector<std::vector<std::string>> names,
                             std::vector<std::vector<std::vector<EZForm>>> faces)
    : max_dim_(max_dim), names_(std::move(names)), faces_(std::move(faces)) {
  names_.resize(max_dim_ + 1);
  faces_.resize(max_dim_ + 1);
  lookup_.resize(max_dim_ + 1);
  for (int d = 0; d <= max_dim_; ++d) {
    for (int i = 0; i < static_cast<int>(names_[d].size()); ++i) {
      auto [it, inserted] = lookup_[d].emplace(names_[d][i], i);
      if (!inserted)
        throw std::runtime_error("duplicate simplex name: " + names_[d][i]);
    }
    if (d >= 1 && faces_[d].size() != names_[d].size())
      throw std::runtime_error("face table size mismatch in dimension " +
                               std::to_string(d));
    for (const auto& row : faces_[d]) {
      if (static_cast<int>(row.size()) != d + 1)
        throw std::runtime_error("face table arity mismatch");
      for (const auto& f : row)
        if (f.dim() != d - 1)
          throw std::runtime_error("face table entry has wrong dimension");
    }
  }
}

int SimplicialSet::count(int dim) const {
  if (dim < 0 || dim > max_dim_) return 0;
  return static_cast<int>(names_[dim].size());
}

long SimplicialSet::total_nondegenerate() const {
  long t = 0;
  for (int d = 0; d <= max_dim_; ++d) t += count(d);
  return t;
}

long SimplicialSet::euler_characteristic() const {
  long chi = 0;
  for (int d = 0; d <= max_dim_; ++d) chi += (d % 2 == 0 ? 1 : -1) * count(d);
  return chi;
}

const std::string& SimplicialSet::name(SimplexId s) const {
  return names_[s.dim][s.index];
}

std::optional<SimplexId> SimplicialSet::find(int dim, const std::string& name) const {
  if (dim < 0 || dim > max_dim_) return std::nullopt;
  auto it = lookup_[dim].find(name);
  if (it == lookup_[dim].end()) return std::nullopt;
  return SimplexId{dim, it->second};
}

const EZForm& SimplicialSet::face(SimplexId s, int i) const {
  if (s.dim < 1 || i < 0 || i > s.dim) throw std::out_of_range("face index");
  return faces_[s.dim][s.index][i];
}

EZForm SimplicialSet::apply(const MonotoneMap& theta, const EZForm& e) const {
  if (theta.cod != e.dim()) throw std::logic_error("apply: dimension mismatch");
  MonotoneMap u = compose(e.surjection(), theta);
  EpiMono em = epi_mono_factor(u);
  if (em.delta.is_identity())
    return EZForm{e.base, collapsed_positions(em.sigma)};
  // Peel one elementary face off the injective part and recurse; the base
  // dimension strictly drops each round.
  int missing = -1;
  {
    std::vector<char> hit(em.delta.cod + 1, 0);
    for (int v : em.delta.values) hit[v] = 1;
    for (int v = em.delta.cod; v >= 0; --v)
      if (!hit[v]) {
        missing = v;
        break;
      }
  }
  const EZForm& f = face(e.base, missing);
  MonotoneMap rest;
  rest.dom = em.delta.dom;
  rest.cod = em.delta.cod - 1;
  rest.values.reserve(em.delta.values.size());
  for (int v : em.delta.values) rest.values.push_back(v < missing ? v : v - 1);
  EZForm g = apply(rest, f);
  MonotoneMap total = compose(g.surjection(), em.sigma);
  return EZForm{g.base, collapsed_positions(total)};
}

EZForm SimplicialSet::face_of(const EZForm& e, int i) const {
  return apply(MonotoneMap::coface(i, e.dim()), e);
}

EZForm SimplicialSet::degeneracy_of(const EZForm& e, int j) const {
  return apply(MonotoneMap::codegeneracy(j, e.dim()), e);
}

std::vector<EZForm> SimplicialSet::all_simplices(int dim) const {
  std::vector<EZForm> out;
  // Choose k collapsed positions among dim for each non-degenerate base of
  // dimension dim-k.
  for (int base_dim = 0; base_dim <= std::min(dim, max_dim_); ++base_dim) {
    int k = dim - base_dim;
    std::vector<int> positions(k);
    std::function<void(int, int)> rec = [&](int start, int depth) {
      if (depth == k) {
        for (int idx = 0; idx < count(base_dim); ++idx)
          out.emplace_back(SimplexId{base_dim, idx},
                           std::vector<int>(positions.begin(), positions.end()));
        return;
      }
      for (int p = start; p < dim; ++p) {
        positions[depth] = p;
        rec(p + 1, depth + 1);
      }
    };
    rec(0, 0);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SimplexId> SimplicialSet::maximal_simplices() const {
  std::vector<std::vector<char>> is_face(max_dim_ + 1);
  for (int d = 0; d <= max_dim_; ++d) is_face[d].assign(count(d), 0);
  for (int d = 1; d <= max_dim_; ++d)
    for (int idx = 0; idx < count(d); ++idx)
      for (int i = 0; i <= d; ++i) {
        const EZForm& f = face(SimplexId{d, idx}, i);
        is_face[f.base.dim][f.base.index] = 1;
      }
  std::vector<SimplexId> out;
  for (int d = max_dim_; d >= 1; --d)
    for (int idx = 0; idx < count(d); ++idx)
      if (!is_face[d][idx]) out.push_back(SimplexId{d, idx});
  return out;
}

std::string SimplicialSet::describe(const EZForm& e) const {
  std::ostringstream os;
  for (auto it = e.degens.rbegin(); it != e.degens.rend(); ++it)
    os << "s" << *it << ".";
  os << name(e.base);
  return os.str();
}

CheckReport check_simplicial(const SimplicialSet& X) {
  CheckReport rep;
  for (int d = 2; d <= X.max_dim(); ++d) {
    for (int idx = 0; idx < X.count(d); ++idx) {
      EZForm e{SimplexId{d, idx}};
      for (int j = 1; j <= d; ++j) {
        for (int i = 0; i < j; ++i) {
          rep.count();
          EZForm a = X.face_of(X.face_of(e, j), i);
          EZForm b = X.face_of(X.face_of(e, i), j - 1);
          if (!(a == b))
            rep.fail("d" + std::to_string(i) + " d" + std::to_string(j) +
                     " != d" + std::to_string(j - 1) + " d" + std::to_string(i) +
                     " at " + X.describe(e));
        }
      }
    }
  }
  return rep;
}

namespace {

// A key is degenerate iff s_j(d_j k) == k for some j.
bool key_is_degenerate(const Presentation& p, int dim, const Presentation::Key& k) {
  for (int j = 0; j < dim; ++j) {
    Presentation::Key down = p.face(dim, k, j);
    if (p.degeneracy(dim - 1, down, j) == k) return true;
  }
  return false;
}

}  // namespace

BuiltComplex build_complex(const Presentation& p) {
  BuiltComplex out;
  int md = p.max_dim;
  out.key_to_ez.resize(md + 1);
  out.nondeg_keys.resize(md + 1);
  std::vector<std::vector<std::string>> names(md + 1);
  std::vector<std::vector<std::vector<EZForm>>> faces(md + 1);
  std::vector<std::map<Presentation::Key, int>> index_of(md + 1);

  for (int d = 0; d <= md; ++d) {
    std::vector<Presentation::Key> keys = p.simplices(d);
    // First pass: identify non-degenerate keys and assign ids in input order.
    for (const auto& k : keys) {
      if (d == 0 || !key_is_degenerate(p, d, k)) {
        index_of[d].emplace(k, static_cast<int>(out.nondeg_keys[d].size()));
        out.nondeg_keys[d].push_back(k);
        names[d].push_back(p.name(d, k));
      }
    }
    // Second pass: EZ normal form of every key of this dimension.
    for (const auto& k : keys) {
      auto it = index_of[d].find(k);
      if (it != index_of[d].end()) {
        out.key_to_ez[d].emplace(k, EZForm{SimplexId{d, it->second}});
        continue;
      }
      int j = -1;
      Presentation::Key down;
      for (int jj = 0; jj < d; ++jj) {
        down = p.face(d, k, jj);
        if (p.degeneracy(d - 1, down, jj) == k) {
          j = jj;
          break;
        }
      }
      if (j < 0) throw std::logic_error("degenerate key without witness");
      const EZForm& sub = out.key_to_ez[d - 1].at(down);
      MonotoneMap total =
          compose(sub.surjection(), MonotoneMap::codegeneracy(j, d - 1));
      out.key_to_ez[d].emplace(k, EZForm{sub.base, collapsed_positions(total)});
    }
    // Face table.
    if (d >= 1) {
      faces[d].reserve(out.nondeg_keys[d].size());
      for (const auto& k : out.nondeg_keys[d]) {
        std::vector<EZForm> row;
        row.reserve(d + 1);
        for (int i = 0; i <= d; ++i)
          row.push_back(out.key_to_ez[d - 1].at(p.face(d, k, i)));
        faces[d].push_back(std::move(row));
      }
    }
  }
  out.space = std::make_shared<SimplicialSet>(md, std::move(names), std::move(faces));
  return out;
}

std::shared_ptr<const SimplicialSet> standard_simplex(int n, int max_dim) {
  if (n < 0) throw std::invalid_argument("standard_simplex: negative dimension");
  if (n > max_dim)
    throw std::runtime_error("standard_simplex: dimension " + std::to_string(n) +
                             " exceeds the supported cap " + std::to_string(max_dim));
  Presentation p;
  p.max_dim = max_dim;
  p.simplices = [n](int d) {
    // Keys: nondecreasing (d+1)-tuples with entries in [0, n].
    std::vector<Presentation::Key> out;
    Presentation::Key cur(d + 1, 0);
    std::function<void(int, int)> rec = [&](int pos, int lo) {
      if (pos == d + 1) {
        out.push_back(cur);
        return;
      }
      for (int v = lo; v <= n; ++v) {
        cur[pos] = v;
        rec(pos + 1, v);
      }
    };
    rec(0, 0);
    return out;
  };
  p.face = [](int, const Presentation::Key& k, int i) {
    Presentation::Key out = k;
    out.erase(out.begin() + i);
    return out;
  };
  p.degeneracy = [](int, const Presentation::Key& k, int j) {
    Presentation::Key out = k;
    out.insert(out.begin() + j, k[j]);
    return out;
  };
  p.name = [](int, const Presentation::Key& k) {
    std::ostringstream os;
    for (size_t i = 0; i < k.size(); ++i) {
      if (i) os << ",";
      os << k[i];
    }
    return os.str();
  };
  return build_complex(p).space;
}

EZForm SimplicialMap::apply(const EZForm& e) const {
  const EZForm& img = image[e.base.dim][e.base.index];
  if (e.degens.empty()) return img;
  return dst->apply(e.surjection(), img);
}

SimplicialMap SimplicialMap::identity(std::shared_ptr<const SimplicialSet> X) {
  SimplicialMap f;
  f.src = X;
  f.dst = X;
  f.image.resize(X->max_dim() + 1);
  for (int d = 0; d <= X->max_dim(); ++d)
    for (int i = 0; i < X->count(d); ++i)
      f.image[d].emplace_back(SimplexId{d, i});
  return f;
}

CheckReport check_simplicial_map(const SimplicialMap& f) {
  CheckReport rep;
  for (int d = 0; d <= f.src->max_dim(); ++d) {
    for (int idx = 0; idx < f.src->count(d); ++idx) {
      EZForm e{SimplexId{d, idx}};
      if (f.image[d][idx].dim() != d) {
        rep.fail("image dimension mismatch at " + f.src->describe(e));
        continue;
      }
      for (int i = 0; i <= d && d >= 1; ++i) {
        rep.count();
        EZForm lhs = f.apply(f.src->face(SimplexId{d, idx}, i));
        EZForm rhs = f.dst->face_of(f.image[d][idx], i);
        if (!(lhs == rhs))
          rep.fail("map does not commute with d" + std::to_string(i) + " at " +
                   f.src->describe(e));
      }
    }
  }
  return rep;
}

SimplicialMap compose_maps(const SimplicialMap& g, const SimplicialMap& f) {
  if (f.dst.get() != g.src.get())
    throw std::logic_error("compose_maps: middle spaces differ");
  SimplicialMap h;
  h.src = f.src;
  h.dst = g.dst;
  h.image.resize(f.src->max_dim() + 1);
  for (int d = 0; d <= f.src->max_dim(); ++d)
    for (int i = 0; i < f.src->count(d); ++i)
      h.image[d].push_back(g.apply(f.image[d][i]));
  return h;
}

bool SubComplex::empty() const {
  for (const auto& level : member)
    for (char c : level)
      if (c) return false;
  return true;
}

SubComplex SubComplex::closure(std::shared_ptr<const SimplicialSet> X,
                               const std::vector<SimplexId>& generators) {
  SubComplex z;
  z.parent = X;
  z.member.resize(X->max_dim() + 1);
  for (int d = 0; d <= X->max_dim(); ++d) z.member[d].assign(X->count(d), 0);
  std::vector<SimplexId> stack(generators);
  while (!stack.empty()) {
    SimplexId s = stack.back();
    stack.pop_back();
    if (z.member[s.dim][s.index]) continue;
    z.member[s.dim][s.index] = 1;
    for (int i = 0; i <= s.dim && s.dim >= 1; ++i)
      stack.push_back(X->face(s, i).base);
  }
  return z;
}

SubComplex SubComplex::whole(std::shared_ptr<const SimplicialSet> X) {
  SubComplex z;
  z.parent = X;
  z.member.resize(X->max_dim() + 1);
  for (int d = 0; d <= X->max_dim(); ++d) z.member[d].assign(X->count(d), 1);
  return z;
}

bool SubComplex::is_face_closed() const {
  for (int d = 1; d <= parent->max_dim(); ++d)
    for (int idx = 0; idx < parent->count(d); ++idx)
      if (member[d][idx])
        for (int i = 0; i <= d; ++i) {
          const EZForm& f = parent->face(SimplexId{d, idx}, i);
          if (!member[f.base.dim][f.base.index]) return false;
        }
  return true;
}

namespace {

Presentation::Key encode_ez(const EZForm& e) {
  Presentation::Key k{e.base.dim, e.base.index};
  for (int d : e.degens) k.push_back(d);
  return k;
}

EZForm decode_ez(const Presentation::Key& k) {
  EZForm e{SimplexId{static_cast<int>(k[0]), static_cast<int>(k[1])}};
  for (size_t i = 2; i < k.size(); ++i) e.degens.push_back(static_cast<int>(k[i]));
  return e;
}

}  // namespace

MaterializedSub materialize(const SubComplex& Z) {
  if (!Z.is_face_closed())
    throw std::runtime_error("subcomplex is not closed under faces");
  auto X = Z.parent;
  Presentation p;
  p.max_dim = X->max_dim();
  p.simplices = [&Z, X](int d) {
    std::vector<Presentation::Key> out;
    for (const EZForm& e : X->all_simplices(d))
      if (Z.member[e.base.dim][e.base.index]) out.push_back(encode_ez(e));
    return out;
  };
  p.face = [X](int d, const Presentation::Key& k, int i) {
    return encode_ez(X->apply(MonotoneMap::coface(i, d), decode_ez(k)));
  };
  p.degeneracy = [X](int d, const Presentation::Key& k, int j) {
    return encode_ez(X->apply(MonotoneMap::codegeneracy(j, d), decode_ez(k)));
  };
  p.name = [X](int, const Presentation::Key& k) {
    return X->name(decode_ez(k).base);
  };
  MaterializedSub out{build_complex(p), {}};
  out.inclusion.src = out.built.space;
  out.inclusion.dst = X;
  out.inclusion.image.resize(X->max_dim() + 1);
  for (int d = 0; d <= X->max_dim(); ++d)
    for (const auto& k : out.built.nondeg_keys[d])
      out.inclusion.image[d].push_back(decode_ez(k));
  return out;
}

Quotient quotient(std::shared_ptr<const SimplicialSet> X, const SubComplex& Z) {
  if (Z.parent.get() != X.get())
    throw std::logic_error("quotient: subcomplex belongs to a different complex");
  if (Z.empty())
    throw std::runtime_error(
        "quotient by an empty subcomplex is rejected; a basepoint is required");
  if (!Z.is_face_closed())
    throw std::runtime_error("subcomplex is not closed under faces");

  const Presentation::Key collapsed{-1};
  auto quot_key = [&Z](const EZForm& e) -> Presentation::Key {
    if (Z.member[e.base.dim][e.base.index]) return {-1};
    return encode_ez(e);
  };

  Presentation p;
  p.max_dim = X->max_dim();
  p.simplices = [X, &Z, collapsed](int d) {
    std::vector<Presentation::Key> out{collapsed};
    for (const EZForm& e : X->all_simplices(d))
      if (!Z.member[e.base.dim][e.base.index]) out.push_back(encode_ez(e));
    return out;
  };
  p.face = [X, quot_key, collapsed](int d, const Presentation::Key& k, int i) {
    if (k == collapsed) return collapsed;
    return quot_key(X->apply(MonotoneMap::coface(i, d), decode_ez(k)));
  };
  p.degeneracy = [X, quot_key, collapsed](int d, const Presentation::Key& k, int j) {
    if (k == collapsed) return collapsed;
    return quot_key(X->apply(MonotoneMap::codegeneracy(j, d), decode_ez(k)));
  };
  p.name = [X, collapsed](int, const Presentation::Key& k) -> std::string {
    if (k == collapsed) return "*";
    return X->name(decode_ez(k).base);
  };

  Quotient out{build_complex(p), {}, {}};
  out.projection.src = X;
  out.projection.dst = out.built.space;
  out.projection.image.resize(X->max_dim() + 1);
  for (int d = 0; d <= X->max_dim(); ++d)
    for (int idx = 0; idx < X->count(d); ++idx)
      out.projection.image[d].push_back(
          out.built.ez_of(d, quot_key(EZForm{SimplexId{d, idx}})));
  auto bp = out.built.space->find(0, "*");
  if (!bp) throw std::logic_error("quotient lost its basepoint");
  out.basepoint = *bp;
  return out;
}

}  // namespace twistlab
