#include "twistlab/geometry.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "twistlab/linalg.hpp"

namespace twistlab {

long PolytopeH::column(SimplexId m, long outcome) const {
  for (size_t i = 0; i < maximal.size(); ++i)
    if (maximal[i] == m) return block_start[i] + outcome;
  throw std::logic_error("column lookup on a non-maximal simplex");
}

int PolytopeH::dim() const {
  return static_cast<int>(coords.size()) - rank(A);
}

PolytopeH build_hrep(std::shared_ptr<const TwistingFunction> tw) {
  PolytopeH P;
  P.twisting = tw;
  const auto& X = tw->base();
  const auto& H = tw->group();
  P.maximal = X->maximal_simplices();
  long ncols = 0;
  for (SimplexId m : P.maximal) {
    P.block_start.push_back(ncols);
    for (long t = 0; t < H.tuple_count(m.dim); ++t)
      P.coords.push_back(PolytopeH::Coord{m, t});
    ncols += H.tuple_count(m.dim);
  }

  // Normalization per maximal simplex.
  for (size_t i = 0; i < P.maximal.size(); ++i) {
    RatVec row(ncols, 0);
    for (long t = 0; t < H.tuple_count(P.maximal[i].dim); ++t)
      row[P.block_start[i] + t] = 1;
    P.A.push_back(std::move(row));
    P.b.push_back(1);
    P.row_label.push_back("normalization(" + X->name(P.maximal[i]) + ")");
  }

  // Expression families: the distribution over each simplex written as linear
  // forms in the maximal-block coordinates, propagated through faces. The
  // first arrival at a simplex is kept as the reference; later arrivals
  // contribute equality rows.
  P.ref.resize(X->max_dim() + 1);
  for (int d = 0; d <= X->max_dim(); ++d) P.ref[d].resize(X->count(d));

  using Family = std::vector<RatVec>;
  std::function<void(SimplexId, const Family&)> process = [&](SimplexId s,
                                                              const Family& F) {
    if (!P.ref[s.dim][s.index].empty()) {
      const Family& R = P.ref[s.dim][s.index];
      for (long t = 0; t < static_cast<long>(F.size()); ++t) {
        RatVec row(ncols, 0);
        bool nonzero = false;
        for (long j = 0; j < ncols; ++j) {
          row[j] = F[t][j] - R[t][j];
          if (row[j] != 0) nonzero = true;
        }
        if (!nonzero) continue;
        P.A.push_back(std::move(row));
        P.b.push_back(0);
        P.row_label.push_back("marginal-match(" + X->name(s) + ", outcome " +
                              H.tuple_str(H.tuple_at(s.dim, t)) + ")");
      }
      return;
    }
    P.ref[s.dim][s.index] = F;
    if (s.dim < 2) return;
    for (int i = 0; i <= s.dim; ++i) {
      // Marginal of the family along the bundle face map.
      Family G(H.tuple_count(s.dim - 1), RatVec(ncols, 0));
      for (long t = 0; t < H.tuple_count(s.dim); ++t) {
        long img = H.tuple_index(
            bundle_face_tuple(*tw, H.tuple_at(s.dim, t), EZForm{s}, i));
        for (long j = 0; j < ncols; ++j) G[img][j] += F[t][j];
      }
      const EZForm& face = X->face(s, i);
      if (!face.is_degenerate()) {
        if (face.base.dim >= 1) process(face.base, G);
        continue;
      }
      // Degenerate face: the pushforward must be supported on the image of
      // the degeneracy word; inside the image it pins the base simplex.
      std::vector<char> in_image(H.tuple_count(s.dim - 1), 0);
      Family Gbase(H.tuple_count(face.base.dim), RatVec(ncols, 0));
      for (long u = 0; u < H.tuple_count(face.base.dim); ++u) {
        NerveTuple g = H.tuple_at(face.base.dim, u);
        for (int j : face.degens) g = H.nerve_degeneracy(g, j);
        long img = H.tuple_index(g);
        in_image[img] = 1;
        Gbase[u] = G[img];
      }
      for (long t = 0; t < H.tuple_count(s.dim - 1); ++t) {
        if (in_image[t]) continue;
        bool nonzero = false;
        for (long j = 0; j < ncols; ++j)
          if (G[t][j] != 0) nonzero = true;
        if (!nonzero) continue;
        P.A.push_back(G[t]);
        P.b.push_back(0);
        P.row_label.push_back("degenerate-face-support(d" + std::to_string(i) +
                              " of " + X->name(s) + ", outcome " +
                              H.tuple_str(H.tuple_at(s.dim - 1, t)) + ")");
      }
      if (face.base.dim >= 1) process(face.base, Gbase);
    }
  };

  for (size_t i = 0; i < P.maximal.size(); ++i) {
    SimplexId m = P.maximal[i];
    Family F(H.tuple_count(m.dim), RatVec(ncols, 0));
    for (long t = 0; t < H.tuple_count(m.dim); ++t)
      F[t][P.block_start[i] + t] = 1;
    process(m, F);
  }
  return P;
}

RatVec vectorize(const PolytopeH& P, const TwistedDistribution& p) {
  RatVec x(P.coords.size(), 0);
  for (size_t j = 0; j < P.coords.size(); ++j)
    x[j] = p.at(P.coords[j].simplex).w[P.coords[j].outcome];
  return x;
}

TwistedDistribution devectorize(const PolytopeH& P, const RatVec& x) {
  TwistedDistribution p(P.twisting);
  const auto& X = P.twisting->base();
  const auto& H = P.twisting->group();
  for (int d = 1; d <= X->max_dim(); ++d)
    for (int idx = 0; idx < X->count(d); ++idx) {
      const auto& F = P.ref[d][idx];
      if (F.empty())
        throw std::logic_error("devectorize: simplex unreachable from maximal");
      DistributionVector v = DistributionVector::zero(H.tuple_count(d));
      for (long t = 0; t < H.tuple_count(d); ++t) v.w[t] = dot(F[t], x);
      p.at(SimplexId{d, idx}) = std::move(v);
    }
  return p;
}

namespace {

// Dense-tableau simplex. Rows are scaled so the right-hand side is
// nonnegative; artificial columns come after the structural ones.
struct Tableau {
  long rows, cols;  // structural columns
  RatMat T;         // rows x (cols + rows + 1); artificials then rhs
  RatVec cost;      // cols + rows + 1
  std::vector<long> basis;

  Tableau(const RatMat& A, const RatVec& b) {
    rows = static_cast<long>(A.size());
    cols = rows ? static_cast<long>(A[0].size()) : 0;
    T.assign(rows, RatVec(cols + rows + 1, 0));
    for (long i = 0; i < rows; ++i) {
      bool flip = b[i] < 0;
      for (long j = 0; j < cols; ++j) T[i][j] = flip ? -A[i][j] : A[i][j];
      T[i][cols + i] = 1;
      T[i][cols + rows] = flip ? -b[i] : b[i];
      basis.push_back(cols + i);
    }
  }

  void pivot(long r, long c) {
    Rational inv = T[r][c];
    for (auto& v : T[r]) v /= inv;
    for (long i = 0; i < rows; ++i) {
      if (i == r || T[i][c] == 0) continue;
      Rational f = T[i][c];
      for (long j = 0; j <= cols + rows; ++j) T[i][j] -= f * T[r][j];
    }
    Rational fc = cost[c];
    if (fc != 0)
      for (long j = 0; j <= cols + rows; ++j) cost[j] -= fc * T[r][j];
    basis[r] = c;
  }

  // Bland's rule; `active` bounds the eligible column range.
  void run(long active) {
    while (true) {
      long enter = -1;
      for (long j = 0; j < active; ++j)
        if (cost[j] < 0) {
          enter = j;
          break;
        }
      if (enter < 0) return;
      long leave = -1;
      Rational best;
      for (long i = 0; i < rows; ++i) {
        if (T[i][enter] <= 0) continue;
        Rational ratio = T[i][cols + rows] / T[i][enter];
        if (leave < 0 || ratio < best ||
            (ratio == best && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) throw std::runtime_error("linear program is unbounded");
      pivot(leave, enter);
    }
  }

  // Phase-I objective: sum of artificials.
  void set_phase1_cost() {
    cost.assign(cols + rows + 1, 0);
    for (long j = cols; j < cols + rows; ++j) cost[j] = 1;
    for (long i = 0; i < rows; ++i)
      if (basis[i] >= cols)
        for (long j = 0; j <= cols + rows; ++j) cost[j] -= T[i][j];
  }

  Rational objective() const { return -cost[cols + rows]; }

  RatVec solution() const {
    RatVec x(cols, 0);
    for (long i = 0; i < rows; ++i)
      if (basis[i] < cols) x[basis[i]] = T[i][cols + rows];
    return x;
  }
};

}  // namespace

LPResult lp_feasible(const RatMat& A, const RatVec& b) {
  LPResult res;
  if (A.empty()) {
    res.feasible = true;
    return res;
  }
  Tableau tab(A, b);
  tab.set_phase1_cost();
  tab.run(tab.cols + tab.rows);
  if (tab.objective() == 0) {
    res.feasible = true;
    res.x = tab.solution();
    return res;
  }
  // Dual values off the artificial columns give the Farkas functional.
  long m = tab.rows;
  RatVec y(m, 0);
  for (long i = 0; i < m; ++i) {
    Rational yi = Rational(1) - tab.cost[tab.cols + i];
    y[i] = (b[i] < 0) ? -yi : yi;  // undo the row flip
  }
  // y^T A <= 0 and y^T b > 0 must hold exactly.
  Rational yb = 0;
  for (long i = 0; i < m; ++i) yb += y[i] * b[i];
  if (yb <= 0) throw std::logic_error("Farkas certificate failed on b");
  for (long j = 0; j < tab.cols; ++j) {
    Rational s = 0;
    for (long i = 0; i < m; ++i) s += y[i] * A[i][j];
    if (s > 0) throw std::logic_error("Farkas certificate failed on A");
  }
  res.feasible = false;
  res.farkas = y;
  return res;
}

std::optional<RatVec> lp_minimize(const RatMat& A, const RatVec& b, const RatVec& c) {
  if (A.empty()) return RatVec(c.size(), 0);
  Tableau tab(A, b);
  tab.set_phase1_cost();
  tab.run(tab.cols + tab.rows);
  if (tab.objective() != 0) return std::nullopt;
  // Drive basic artificials out where possible; redundant rows stay harmless
  // because their artificial basic variable is pinned at zero and artificials
  // are excluded from phase II.
  for (long i = 0; i < tab.rows; ++i) {
    if (tab.basis[i] < tab.cols) continue;
    for (long j = 0; j < tab.cols; ++j)
      if (tab.T[i][j] != 0) {
        tab.pivot(i, j);
        break;
      }
  }
  tab.cost.assign(tab.cols + tab.rows + 1, 0);
  for (long j = 0; j < tab.cols; ++j) tab.cost[j] = c[j];
  for (long i = 0; i < tab.rows; ++i)
    if (tab.basis[i] < tab.cols && tab.cost[tab.basis[i]] != 0) {
      Rational f = tab.cost[tab.basis[i]];
      for (long j = 0; j <= tab.cols + tab.rows; ++j)
        tab.cost[j] -= f * tab.T[i][j];
    }
  tab.run(tab.cols);
  return tab.solution();
}

namespace {

struct Ray {
  RatVec z;
  std::vector<uint64_t> tight;
};

void normalize_ray(RatVec& z) {
  for (const auto& v : z)
    if (v != 0) {
      Rational f = abs(v);
      for (auto& w : z) w /= f;
      return;
    }
}

bool subset_of(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if ((a[i] & ~b[i]) != 0) return false;
  return true;
}

}  // namespace

VertexEnumeration enumerate_vertices(const PolytopeH& P, long ray_cap, int jobs) {
  VertexEnumeration out;
  long n = static_cast<long>(P.coords.size());

  LPResult feas = lp_feasible(P.A, P.b);
  if (!feas.feasible) {
    out.empty_polytope = true;
    return out;
  }

  // Homogenize: E (x, t) = 0 with rows (A | -b); inequalities x_i >= 0, t >= 0.
  RatMat E = P.A;
  for (size_t i = 0; i < E.size(); ++i) E[i].push_back(-P.b[i]);
  RatMat N = null_space(E, static_cast<int>(n + 1));
  long m = static_cast<long>(N.size());
  long nineq = n + 1;
  RatMat G(nineq, RatVec(m, 0));
  for (long i = 0; i <= n; ++i)
    for (long k = 0; k < m; ++k) G[i][k] = N[k][i];

  std::vector<char> skip(nineq, 0);
  for (long i = 0; i < nineq; ++i) {
    bool zero = true;
    for (long k = 0; k < m; ++k)
      if (G[i][k] != 0) zero = false;
    skip[i] = zero;  // identically tight; irrelevant to the cone
  }

  // Initial simplicial cone from the first m independent inequality rows.
  std::vector<long> init;
  {
    RatMat probe;
    for (long i = 0; i < nineq && static_cast<long>(init.size()) < m; ++i) {
      if (skip[i]) continue;
      probe.push_back(G[i]);
      if (rank(probe) == static_cast<int>(probe.size()))
        init.push_back(i);
      else
        probe.pop_back();
    }
    if (static_cast<long>(init.size()) != m)
      throw std::logic_error("homogenization cone is not pointed");
  }

  size_t words = (nineq + 63) / 64;
  auto tight_mask = [&](const RatVec& z, const std::vector<char>& processed) {
    std::vector<uint64_t> mask(words, 0);
    for (long i = 0; i < nineq; ++i) {
      if (!processed[i] || skip[i]) continue;
      if (dot(G[i], z) == 0) mask[i / 64] |= (uint64_t(1) << (i % 64));
    }
    return mask;
  };

  std::vector<char> processed(nineq, 0);
  for (long i : init) processed[i] = 1;

  // Rays of the simplicial cone: columns of the inverse of the init rows.
  std::vector<Ray> rays;
  {
    RatMat aug(m, RatVec(2 * m, 0));
    for (long r = 0; r < m; ++r) {
      for (long k = 0; k < m; ++k) aug[r][k] = G[init[r]][k];
      aug[r][m + r] = 1;
    }
    rref(aug);
    for (long c = 0; c < m; ++c) {
      Ray ray;
      ray.z.resize(m);
      for (long r = 0; r < m; ++r) ray.z[r] = aug[r][m + c];
      normalize_ray(ray.z);
      ray.tight = tight_mask(ray.z, processed);
      rays.push_back(std::move(ray));
    }
  }

  std::vector<long> pending;
  for (long i = 0; i < nineq; ++i)
    if (!processed[i] && !skip[i]) pending.push_back(i);

  while (!pending.empty()) {
    // Most-violated-first insertion order, ties by index.
    long pick = -1, pick_pos = -1, best = -1;
    for (size_t pi = 0; pi < pending.size(); ++pi) {
      long h = pending[pi];
      long violated = 0;
      for (const Ray& r : rays)
        if (dot(G[h], r.z) < 0) ++violated;
      if (violated > best) {
        best = violated;
        pick = h;
        pick_pos = static_cast<long>(pi);
      }
    }
    pending.erase(pending.begin() + pick_pos);
    long h = pick;

    std::vector<Rational> val(rays.size());
    std::vector<long> pos, neg;
    for (size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(G[h], rays[i].z);
      if (val[i] > 0) pos.push_back(static_cast<long>(i));
      if (val[i] < 0) neg.push_back(static_cast<long>(i));
    }
    processed[h] = 1;
    if (neg.empty()) {
      for (size_t i = 0; i < rays.size(); ++i)
        if (val[i] == 0) rays[i].tight[h / 64] |= (uint64_t(1) << (h % 64));
      continue;
    }

    // Adjacent (+,-) pairs spawn the new boundary rays.
    std::vector<std::pair<long, long>> pairs;
    for (long p : pos)
      for (long q : neg) pairs.emplace_back(p, q);
    std::vector<char> adjacent(pairs.size(), 0);
    auto test_range = [&](size_t lo, size_t hi) {
      std::vector<uint64_t> meet(words);
      for (size_t t = lo; t < hi; ++t) {
        auto [p, q] = pairs[t];
        for (size_t w = 0; w < words; ++w)
          meet[w] = rays[p].tight[w] & rays[q].tight[w];
        bool adj = true;
        for (size_t r = 0; r < rays.size() && adj; ++r) {
          if (static_cast<long>(r) == p || static_cast<long>(r) == q) continue;
          if (subset_of(meet, rays[r].tight)) adj = false;
        }
        adjacent[t] = adj;
      }
    };
    if (jobs <= 1 || pairs.size() < 64) {
      test_range(0, pairs.size());
    } else {
      std::vector<std::thread> pool;
      size_t chunk = (pairs.size() + jobs - 1) / jobs;
      for (int t = 0; t < jobs; ++t) {
        size_t lo = t * chunk, hi = std::min(pairs.size(), lo + chunk);
        if (lo < hi) pool.emplace_back(test_range, lo, hi);
      }
      for (auto& th : pool) th.join();
    }

    std::vector<Ray> next;
    for (size_t i = 0; i < rays.size(); ++i) {
      if (val[i] > 0) next.push_back(rays[i]);
      if (val[i] == 0) {
        rays[i].tight[h / 64] |= (uint64_t(1) << (h % 64));
        next.push_back(rays[i]);
      }
    }
    for (size_t t = 0; t < pairs.size(); ++t) {
      if (!adjacent[t]) continue;
      auto [p, q] = pairs[t];
      Ray r;
      r.z.resize(m);
      for (long k = 0; k < m; ++k)
        r.z[k] = val[p] * rays[q].z[k] - val[q] * rays[p].z[k];
      normalize_ray(r.z);
      r.tight = tight_mask(r.z, processed);
      next.push_back(std::move(r));
    }
    rays = std::move(next);
    out.dd_rays_peak = std::max(out.dd_rays_peak, static_cast<long>(rays.size()));
    if (static_cast<long>(rays.size()) > ray_cap) {
      out.complete = false;
      break;
    }
  }

  // Scale rays to t = 1; a t = 0 ray would be a recession direction, which
  // boundedness rules out.
  std::set<RatVec> verts;
  for (const Ray& r : rays) {
    RatVec xt(n + 1, 0);
    for (long j = 0; j <= n; ++j) {
      Rational s = 0;
      for (long k = 0; k < m; ++k) s += N[k][j] * r.z[k];
      xt[j] = s;
    }
    if (xt[n] == 0)
      throw std::logic_error("unbounded direction in a bounded polytope");
    RatVec x(n);
    for (long j = 0; j < n; ++j) x[j] = xt[j] / xt[n];
    verts.insert(std::move(x));
  }
  out.vertices.assign(verts.begin(), verts.end());
  return out;
}

VertexEnumeration brute_force_vertices(const PolytopeH& P, long node_cap) {
  // Saturated-subsystem search: parametrize the equality space affinely, then
  // enumerate rank-increasing chains of tight nonnegativity constraints until
  // the chain pins a point. Every vertex arises from some such chain taken in
  // increasing coordinate order.
  VertexEnumeration out;
  long n = static_cast<long>(P.coords.size());
  auto S0 = solve_affine(P.A, P.b, static_cast<int>(n));
  if (!S0) {
    out.empty_polytope = true;
    return out;
  }
  long dim = S0->dim();
  if (dim == 0) {
    bool nonneg = true;
    for (const auto& v : S0->point)
      if (v < 0) nonneg = false;
    if (nonneg) out.vertices.push_back(S0->point);
    return out;
  }

  // Tight constraint i reads row_i . z = -rhs_i in the parameter space.
  RatMat row(n, RatVec(dim, 0));
  RatVec rhs(n);
  for (long i = 0; i < n; ++i) {
    for (long k = 0; k < dim; ++k) row[i][k] = S0->basis[k][i];
    rhs[i] = S0->point[i];
  }

  std::set<RatVec> verts;
  long nodes = 0;
  bool complete = true;

  // Echelon rows over (dim coefficients | rhs) with recorded pivot columns.
  struct Ech {
    RatMat rows;
    std::vector<int> pivots;
  };
  std::function<void(long, const Ech&)> dfs = [&](long next, const Ech& ech) {
    if (!complete) return;
    if (++nodes > node_cap) {
      complete = false;
      return;
    }
    long have = static_cast<long>(ech.rows.size());
    if (have == dim) {
      // Unique z: back-substitute.
      RatVec z(dim, 0);
      for (long r = dim - 1; r >= 0; --r) {
        Rational acc = ech.rows[r][dim];
        for (long c = 0; c < dim; ++c)
          if (c != ech.pivots[r]) acc -= ech.rows[r][c] * z[c];
        z[ech.pivots[r]] = acc / ech.rows[r][ech.pivots[r]];
      }
      RatVec x(n);
      bool nonneg = true;
      for (long i = 0; i < n && nonneg; ++i) {
        x[i] = rhs[i] + dot(row[i], z);
        if (x[i] < 0) nonneg = false;
      }
      if (nonneg) verts.insert(std::move(x));
      return;
    }
    for (long i = next; i < n; ++i) {
      if (n - i < dim - have) break;  // not enough rows left to reach full rank
      // Reduce row i against the echelon.
      RatVec red(dim + 1);
      for (long c = 0; c < dim; ++c) red[c] = row[i][c];
      red[dim] = -rhs[i];
      for (long r = 0; r < have; ++r) {
        const Rational& f = red[ech.pivots[r]];
        if (f == 0) continue;
        Rational factor = f / ech.rows[r][ech.pivots[r]];
        for (long c = 0; c <= dim; ++c) red[c] -= factor * ech.rows[r][c];
      }
      int piv = -1;
      for (long c = 0; c < dim; ++c)
        if (red[c] != 0) {
          piv = static_cast<int>(c);
          break;
        }
      if (piv < 0) continue;  // dependent or inconsistent; either way no progress
      Ech ech2 = ech;
      ech2.rows.push_back(std::move(red));
      ech2.pivots.push_back(piv);
      dfs(i + 1, ech2);
    }
  };
  dfs(0, Ech{});
  out.complete = complete;
  out.vertices.assign(verts.begin(), verts.end());
  return out;
}

ContextualityVerdict is_noncontextual(const TwistedDistribution& p,
                                      long section_cap) {
  ContextualityVerdict verdict;
  std::vector<Section> secs = sections(p.twisting(), section_cap);
  if (secs.empty()) {
    verdict.reason = "no sections";
    return verdict;
  }
  PolytopeH P = build_hrep(p.twisting());
  long rows = static_cast<long>(P.coords.size());
  RatMat A(rows + 1, RatVec(secs.size(), 0));
  RatVec b(rows + 1, 0);
  for (size_t j = 0; j < secs.size(); ++j) {
    RatVec col = vectorize(P, delta_distribution(secs[j]));
    for (long r = 0; r < rows; ++r) A[r][j] = col[r];
    A[rows][j] = 1;
  }
  RatVec target = vectorize(P, p);
  for (long r = 0; r < rows; ++r) b[r] = target[r];
  b[rows] = 1;

  LPResult lp = lp_feasible(A, b);
  if (lp.feasible) {
    ClassicalCertificate cert;
    cert.lambda = lp.x;
    cert.sections = std::move(secs);
    verdict.certificate = std::move(cert);
    return verdict;
  }
  // The Farkas functional strictly separates p from every deterministic
  // point: f(q) = y_coords . q + y_const.
  verdict.reason = "separating hyperplane";
  verdict.separating = lp.farkas;
  Rational fp = lp.farkas[rows];
  for (long r = 0; r < rows; ++r) fp += lp.farkas[r] * target[r];
  if (fp <= 0) throw std::logic_error("separating functional fails on p");
  for (size_t j = 0; j < secs.size(); ++j) {
    Rational fd = lp.farkas[rows];
    for (long r = 0; r < rows; ++r) fd += lp.farkas[r] * A[r][j];
    if (fd > 0) throw std::logic_error("separating functional fails on a delta");
  }
  return verdict;
}

ContextualityVerdict relative_noncontextual(const TwistedDistribution& p,
                                            const SimplicialMap& f,
                                            long section_cap) {
  Cochain pulled = pull_back(p.twisting()->cocycle(), f);
  if (!solve_trivialization(pulled))
    throw std::runtime_error(
        "restriction map is not trivializing: the pulled-back class is nonzero");
  return is_noncontextual(restrict_along(p, f), section_cap);
}

std::vector<int> vertex_orbits(const std::vector<RatVec>& vertices,
                               const std::vector<CoordinateSymmetry>& gens) {
  std::map<RatVec, int> index;
  for (size_t i = 0; i < vertices.size(); ++i)
    index.emplace(vertices[i], static_cast<int>(i));
  std::vector<int> parent(vertices.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& g : gens) {
    for (size_t i = 0; i < vertices.size(); ++i) {
      RatVec img(vertices[i].size());
      for (size_t j = 0; j < img.size(); ++j) img[j] = vertices[i][g.perm[j]];
      auto it = index.find(img);
      if (it == index.end())
        throw std::runtime_error("symmetry '" + g.name +
                                 "' does not preserve the vertex set");
      int a = find(static_cast<int>(i)), bI = find(it->second);
      if (a != bI) parent[a] = bI;
    }
  }
  std::vector<int> orbit(vertices.size(), -1);
  int next = 0;
  for (size_t i = 0; i < vertices.size(); ++i) {
    int r = find(static_cast<int>(i));
    if (orbit[r] < 0) orbit[r] = next++;
    orbit[i] = orbit[r];
  }
  return orbit;
}

std::optional<TwistedDistribution> sample_distribution(const PolytopeH& P,
                                                       std::mt19937_64& rng) {
  long n = static_cast<long>(P.coords.size());
  std::vector<RatVec> anchors;
  for (int round = 0; round < 3; ++round) {
    RatVec c(n);
    for (long j = 0; j < n; ++j)
      c[j] = rat(static_cast<long>(rng() % 19) - 9);
    auto x = lp_minimize(P.A, P.b, c);
    if (!x) return std::nullopt;
    anchors.push_back(*x);
  }
  RatVec x(n, 0);
  for (const auto& a : anchors)
    for (long j = 0; j < n; ++j) x[j] += a[j] / 3;

  RatMat N = null_space(P.A, static_cast<int>(n));
  for (int round = 0; round < 4 && !N.empty(); ++round) {
    RatVec d(n, 0);
    for (const auto& bvec : N) {
      long coeff = static_cast<long>(rng() % 7) - 3;
      if (coeff == 0) continue;
      for (long j = 0; j < n; ++j) d[j] += coeff * bvec[j];
    }
    bool zero = true;
    for (const auto& v : d)
      if (v != 0) zero = false;
    if (zero) continue;
    // Largest steps keeping x + t d >= 0 in both directions.
    Rational tmax, tmin;
    bool has_max = false, has_min = false;
    for (long j = 0; j < n; ++j) {
      if (d[j] < 0) {
        Rational t = x[j] / -d[j];
        if (!has_max || t < tmax) tmax = t, has_max = true;
      }
      if (d[j] > 0) {
        Rational t = x[j] / d[j];
        if (!has_min || t < tmin) tmin = t, has_min = true;
      }
    }
    if (!has_max || !has_min) continue;  // unbounded direction: skip
    Rational lo = -tmin, hi = tmax;
    if (lo == hi) continue;
    Rational lambda = rat(static_cast<long>(rng() % 7) + 1, 9);
    Rational t = lo + (hi - lo) * lambda;
    for (long j = 0; j < n; ++j) x[j] += t * d[j];
  }
  return devectorize(P, x);
}

int saturation_rank(const PolytopeH& P, const RatVec& x) {
  RatMat rows = P.A;
  long n = static_cast<long>(P.coords.size());
  for (long j = 0; j < n; ++j)
    if (x[j] == 0) {
      RatVec r(n, 0);
      r[j] = 1;
      rows.push_back(std::move(r));
    }
  return rank(rows);
}

}  // namespace twistlab
