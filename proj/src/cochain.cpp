#include "twistlab/cochain.hpp"

#include <algorithm>
#include <numeric>

#include "twistlab/linalg.hpp"

namespace twistlab {

Cochain::Cochain(std::shared_ptr<const SimplicialSet> space,
                 FiniteAbelianGroup group, int degree)
    : space_(std::move(space)), group_(std::move(group)), degree_(degree) {
  values_.assign(space_->count(degree), group_.zero());
}

void Cochain::set(SimplexId s, GroupElem v) {
  if (s.dim != degree_) throw std::logic_error("cochain degree mismatch");
  values_[s.index] = std::move(v);
}

GroupElem Cochain::eval(const EZForm& e) const {
  if (e.dim() != degree_) throw std::logic_error("cochain evaluated off-degree");
  if (e.is_degenerate()) return group_.zero();
  return values_[e.base.index];
}

bool Cochain::is_zero() const {
  for (const auto& v : values_)
    if (!group_.is_zero(v)) return false;
  return true;
}

bool Cochain::operator==(const Cochain& o) const {
  return space_.get() == o.space_.get() && group_ == o.group_ &&
         degree_ == o.degree_ && values_ == o.values_;
}

Cochain Cochain::operator+(const Cochain& o) const {
  Cochain r = *this;
  for (size_t i = 0; i < values_.size(); ++i)
    r.values_[i] = group_.add(values_[i], o.values_[i]);
  return r;
}

Cochain Cochain::operator-(const Cochain& o) const {
  Cochain r = *this;
  for (size_t i = 0; i < values_.size(); ++i)
    r.values_[i] = group_.sub(values_[i], o.values_[i]);
  return r;
}

Cochain Cochain::operator-() const {
  Cochain r = *this;
  for (size_t i = 0; i < values_.size(); ++i) r.values_[i] = group_.neg(values_[i]);
  return r;
}

Cochain coboundary(const Cochain& c) {
  const auto& X = c.space();
  int k = c.degree();
  Cochain out(X, c.group(), k + 1);
  for (int idx = 0; idx < X->count(k + 1); ++idx) {
    GroupElem acc = c.group().zero();
    for (int i = 0; i <= k + 1; ++i) {
      GroupElem term = c.eval(X->face(SimplexId{k + 1, idx}, i));
      acc = (i % 2 == 0) ? c.group().add(acc, term) : c.group().sub(acc, term);
    }
    out.set(idx, acc);
  }
  return out;
}

bool is_cocycle(const Cochain& c) { return coboundary(c).is_zero(); }

Cochain pull_back(const Cochain& c, const SimplicialMap& f) {
  if (f.dst.get() != c.space().get())
    throw std::logic_error("pull_back: map does not land in the cochain's space");
  Cochain out(f.src, c.group(), c.degree());
  for (int idx = 0; idx < f.src->count(c.degree()); ++idx)
    out.set(idx, c.eval(f.apply(EZForm{SimplexId{c.degree(), idx}})));
  return out;
}

namespace {

long mod_pos(long v, long m) { return ((v % m) + m) % m; }

long mod_inverse(long a, long m) {
  long old_r = a, r = m, old_s = 1, s = 0;
  while (r != 0) {
    long q = old_r / r;
    std::tie(old_r, r) = std::make_tuple(r, old_r - q * r);
    std::tie(old_s, s) = std::make_tuple(s, old_s - q * s);
  }
  if (old_r != 1 && old_r != -1) throw std::logic_error("mod_inverse: not coprime");
  if (old_r == -1) old_s = -old_s;
  return mod_pos(old_s, m);
}

using IMat = std::vector<std::vector<Integer>>;

// One cyclic component of the coboundary system: M a = rhs over Z_d.
struct ComponentSystem {
  const IMat& M;
  std::vector<long> rhs;
  long d;
  int cols;
};

// Particular solution (in the unknowns' space) or nullopt.
std::optional<std::vector<long>> component_particular(const ComponentSystem& sys) {
  SmithForm snf = smith_normal_form(sys.M, sys.cols);
  int rows = snf.rows, cols = snf.cols;
  int n = std::min(rows, cols);
  std::vector<long> b(rows, 0);
  for (int i = 0; i < rows; ++i) {
    Integer acc = 0;
    for (int j = 0; j < rows; ++j) acc += snf.U[i][j] * sys.rhs[j];
    b[i] = mod_pos(static_cast<long>(mpz_class(acc % sys.d).get_si()), sys.d);
  }
  std::vector<long> y(cols, 0);
  for (int i = 0; i < rows; ++i) {
    long di = i < n ? static_cast<long>(snf.diag[i].get_si()) : 0;
    if (di == 0) {
      if (b[i] % sys.d != 0) return std::nullopt;
      continue;
    }
    long g = std::gcd(di, sys.d);
    if (b[i] % g != 0) return std::nullopt;
    long dq = sys.d / g;
    y[i] = mod_pos((b[i] / g) % dq * mod_inverse((di / g) % dq, dq), dq);
  }
  std::vector<long> a(cols, 0);
  for (int j = 0; j < cols; ++j) {
    Integer acc = 0;
    for (int i = 0; i < cols; ++i) acc += snf.V[j][i] * y[i];
    a[j] = mod_pos(static_cast<long>(mpz_class(acc % sys.d).get_si()), sys.d);
  }
  return a;
}

// Kernel generators of M over Z_d, each with its order.
std::vector<CoboundarySolver::KernelGenerator> component_kernel(const IMat& M,
                                                                long d, int cols) {
  SmithForm snf = smith_normal_form(M, cols);
  int n = std::min(snf.rows, snf.cols);
  std::vector<CoboundarySolver::KernelGenerator> gens;
  for (int i = 0; i < cols; ++i) {
    long di = i < n ? static_cast<long>(snf.diag[i].get_si()) : 0;
    long g = di == 0 ? d : std::gcd(di, d);
    if (g == 1) continue;
    long step = d / g;
    CoboundarySolver::KernelGenerator kg;
    kg.order = g;
    kg.vec.resize(cols);
    for (int j = 0; j < cols; ++j) {
      Integer acc = snf.V[j][i] * step;
      kg.vec[j] = mod_pos(static_cast<long>(mpz_class(acc % d).get_si()), d);
    }
    gens.push_back(std::move(kg));
  }
  return gens;
}

}  // namespace

CoboundarySolver::CoboundarySolver(const Cochain& target) : target_(target) {
  const auto& X = target.space();
  const auto& H = target.group();
  int k = target.degree();
  int rows = X->count(k);
  int cols = X->count(k - 1);
  least_ = Cochain(X, H, k - 1);

  // Shared integer incidence matrix: entry accumulates (-1)^i over the faces
  // of each k-simplex that land on a given non-degenerate (k-1)-simplex.
  IMat M(rows, std::vector<Integer>(cols, 0));
  for (int r = 0; r < rows; ++r)
    for (int i = 0; i <= k; ++i) {
      const EZForm& f = X->face(SimplexId{k, r}, i);
      if (f.is_degenerate()) continue;
      M[r][f.base.index] += (i % 2 == 0) ? 1 : -1;
    }

  solvable_ = true;
  std::vector<std::vector<long>> particulars;
  for (int comp = 0; comp < H.rank(); ++comp) {
    long d = H.moduli()[comp];
    ComponentSystem sys{M, {}, d, cols};
    sys.rhs.resize(rows);
    for (int r = 0; r < rows; ++r) sys.rhs[r] = target.value(r)[comp];
    auto part = component_particular(sys);
    if (!part) {
      solvable_ = false;
      return;
    }
    particulars.push_back(*part);
  }

  // Lexicographically least solution: fix unknowns one at a time, testing
  // feasibility with unit rows appended to the incidence matrix.
  for (int comp = 0; comp < H.rank(); ++comp) {
    long d = H.moduli()[comp];
    IMat Mfix = M;
    std::vector<long> rhs_fix;
    for (int r = 0; r < rows; ++r) rhs_fix.push_back(target_.value(r)[comp]);
    std::vector<long> chosen(cols, 0);
    for (int j = 0; j < cols; ++j) {
      Mfix.push_back(std::vector<Integer>(cols, 0));
      Mfix.back()[j] = 1;
      rhs_fix.push_back(0);
      bool found = false;
      for (long rres = 0; rres < d && !found; ++rres) {
        rhs_fix.back() = rres;
        ComponentSystem sys{Mfix, rhs_fix, d, cols};
        if (component_particular(sys)) {
          chosen[j] = rres;
          found = true;
        }
      }
      if (!found) throw std::logic_error("lex search lost feasibility");
    }
    for (int j = 0; j < cols; ++j) {
      GroupElem v = least_.value(j);
      v[comp] = static_cast<int>(chosen[j]);
      least_.set(j, std::move(v));
    }
  }

  for (int comp = 0; comp < H.rank(); ++comp) {
    long d = H.moduli()[comp];
    kernel_cache_.push_back(component_kernel(M, d, cols));
    particular_cache_.push_back(particulars[comp]);
  }
}

const Cochain& CoboundarySolver::least_solution() const {
  if (!solvable_) throw std::logic_error("no solution exists");
  return least_;
}

long CoboundarySolver::solution_count() const {
  if (!solvable_) return 0;
  long total = 1;
  for (const auto& gens : kernel_cache_)
    for (const auto& g : gens) {
      if (total > (1L << 60) / std::max(1L, g.order))
        throw CapacityError("solution count overflow", -1);
      total *= g.order;
    }
  return total;
}

std::vector<Cochain> CoboundarySolver::all_solutions(long cap) const {
  if (!solvable_) return {};
  const auto& H = target_.group();
  int cols = target_.space()->count(target_.degree() - 1);
  long count = solution_count();
  if (count > cap) throw CapacityError("solution enumeration exceeds cap", count);

  // Enumerate each component's solution set, then take the product.
  std::vector<std::vector<std::vector<long>>> per_comp;
  for (int comp = 0; comp < H.rank(); ++comp) {
    long d = H.moduli()[comp];
    const auto& gens = kernel_cache_[comp];
    std::vector<std::vector<long>> sols;
    std::vector<long> multi(gens.size(), 0);
    while (true) {
      std::vector<long> a = particular_cache_[comp];
      for (size_t g = 0; g < gens.size(); ++g)
        for (int j = 0; j < cols; ++j)
          a[j] = mod_pos(a[j] + multi[g] * gens[g].vec[j], d);
      sols.push_back(std::move(a));
      size_t g = 0;
      while (g < gens.size() && ++multi[g] == gens[g].order) multi[g++] = 0;
      if (g == gens.size()) break;
    }
    std::sort(sols.begin(), sols.end());
    sols.erase(std::unique(sols.begin(), sols.end()), sols.end());
    per_comp.push_back(std::move(sols));
  }

  std::vector<Cochain> out;
  std::vector<size_t> pick(H.rank(), 0);
  while (true) {
    Cochain c(target_.space(), H, target_.degree() - 1);
    for (int j = 0; j < cols; ++j) {
      GroupElem v = H.zero();
      for (int comp = 0; comp < H.rank(); ++comp)
        v[comp] = static_cast<int>(per_comp[comp][pick[comp]][j]);
      c.set(j, std::move(v));
    }
    out.push_back(std::move(c));
    int comp = 0;
    while (comp < H.rank() && ++pick[comp] == per_comp[comp].size()) pick[comp++] = 0;
    if (comp == H.rank() || H.rank() == 0) break;
  }
  return out;
}

std::optional<Cochain> solve_trivialization(const Cochain& gamma) {
  if (!is_cocycle(gamma))
    throw std::runtime_error("solve_trivialization: input is not a cocycle");
  CoboundarySolver solver(gamma);
  if (!solver.solvable()) return std::nullopt;
  return solver.least_solution();
}

}  // namespace twistlab
