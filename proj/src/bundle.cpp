#include "twistlab/bundle.hpp"

#include <algorithm>
#include <sstream>

namespace twistlab {

namespace {

// Injection [1] -> [n] selecting vertices {a, b}; a == b yields the constant
// map, i.e. the degenerate edge at that vertex.
MonotoneMap edge_selector(int a, int b, int n) {
  MonotoneMap m;
  m.dom = 1;
  m.cod = n;
  m.values = {a, b};
  return m;
}

// The spine tuple of a 1-cochain: component k is alpha on the {0,k} edge
// minus alpha on the {0,k-1} edge. Shared by sections and bundle
// equivalences.
NerveTuple spine_tuple(const Cochain& alpha, const EZForm& e) {
  const auto& X = alpha.space();
  const auto& H = alpha.group();
  int n = e.dim();
  NerveTuple t(n, H.zero());
  for (int k = 1; k <= n; ++k) {
    GroupElem hi = alpha.eval(X->apply(edge_selector(0, k, n), e));
    GroupElem lo = k == 1 ? H.zero()
                          : alpha.eval(X->apply(edge_selector(0, k - 1, n), e));
    t[k - 1] = H.sub(hi, lo);
  }
  return t;
}

}  // namespace

TwistingFunction TwistingFunction::from_cocycle(const Cochain& gamma) {
  if (gamma.degree() != 2)
    throw std::runtime_error("twisting requires a 2-cochain");
  if (!is_cocycle(gamma))
    throw std::runtime_error("twisting requires a normalized 2-cocycle");
  TwistingFunction tw(gamma);
  const auto& X = gamma.space();
  tw.cache_.resize(X->max_dim() + 1);
  for (int d = 1; d <= X->max_dim(); ++d) {
    tw.cache_[d].reserve(X->count(d));
    for (int idx = 0; idx < X->count(d); ++idx)
      tw.cache_[d].push_back(tw.eta_recursive(EZForm{SimplexId{d, idx}}));
  }
  CheckReport rep = tw.verify();
  if (!rep.ok)
    throw std::logic_error("twisting identities failed: " + rep.first_violation);
  return tw;
}

const std::shared_ptr<const SimplicialSet>& TwistingFunction::base() const {
  return gamma_.space();
}

NerveTuple TwistingFunction::eta_recursive(const EZForm& e) const {
  const auto& X = gamma_.space();
  const auto& H = group();
  int n = e.dim();
  if (n == 1) return {};
  if (n == 2) return {gamma_.eval(e)};
  MonotoneMap front3;
  front3.dom = 2;
  front3.cod = n;
  front3.values = {0, 1, 2};
  GroupElem head = gamma_.eval(X->apply(front3, e));
  NerveTuple tail = H.tuple_sub(eta(X->face_of(e, 1)), eta(X->face_of(e, 0)));
  NerveTuple out;
  out.reserve(n - 1);
  out.push_back(head);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

NerveTuple TwistingFunction::eta(const EZForm& e) const {
  const auto& H = group();
  int n = e.dim();
  if (n < 1) throw std::logic_error("eta undefined in dimension 0");
  if (!e.is_degenerate()) {
    if (!cache_.empty() && n < static_cast<int>(cache_.size()))
      return cache_[n][e.base.index];
    return eta_recursive(e);
  }
  int j = e.degens.back();
  EZForm inner{e.base, std::vector<int>(e.degens.begin(), e.degens.end() - 1)};
  if (j == 0) return H.tuple_zero(n - 1);
  return H.nerve_degeneracy(eta(inner), j - 1);
}

CheckReport TwistingFunction::verify() const {
  CheckReport rep;
  const auto& X = gamma_.space();
  const auto& H = group();
  for (int n = 2; n <= X->max_dim(); ++n) {
    for (const EZForm& e : X->all_simplices(n)) {
      NerveTuple v = eta(e);
      rep.count();
      if (!(eta_recursive(e) == v))
        rep.fail("recursion/degeneracy clause mismatch at " + X->describe(e));
      // d_0 eta(x) = eta(d_1 x) - eta(d_0 x)
      rep.count();
      NerveTuple want =
          H.tuple_sub(eta(X->face_of(e, 1)), eta(X->face_of(e, 0)));
      if (!(H.nerve_face(v, 0) == want))
        rep.fail("d0 twisting identity fails at " + X->describe(e));
      // d_i eta(x) = eta(d_{i+1} x) for i > 0
      for (int i = 1; i <= n - 2; ++i) {
        rep.count();
        if (!(H.nerve_face(v, i) == eta(X->face_of(e, i + 1))))
          rep.fail("d" + std::to_string(i) + " twisting identity fails at " +
                   X->describe(e));
      }
    }
  }
  return rep;
}

bool TwistingFunction::same_shape(const TwistingFunction& o) const {
  return base().get() == o.base().get() && group() == o.group();
}

TwistingFunction tensor(const TwistingFunction& a, const TwistingFunction& b) {
  if (!a.same_shape(b))
    throw std::runtime_error("tensor: twistings live on different bundles");
  return TwistingFunction::from_cocycle(a.cocycle() + b.cocycle());
}

TwistingFunction inverse(const TwistingFunction& a) {
  return TwistingFunction::from_cocycle(-a.cocycle());
}

NerveTuple bundle_face_tuple(const TwistingFunction& eta, const NerveTuple& g,
                             const EZForm& x, int i) {
  const auto& H = eta.group();
  if (i == 0) return H.tuple_add(H.nerve_face(g, 0), eta.eta(x));
  return H.nerve_face(g, i);
}

namespace {

Presentation::Key encode_ez_key(const EZForm& e) {
  Presentation::Key k{e.base.dim, e.base.index};
  for (int d : e.degens) k.push_back(d);
  return k;
}

EZForm decode_ez_key(const Presentation::Key& k, size_t from) {
  EZForm e{SimplexId{static_cast<int>(k[from]), static_cast<int>(k[from + 1])}};
  for (size_t i = from + 2; i < k.size(); ++i)
    e.degens.push_back(static_cast<int>(k[i]));
  return e;
}

}  // namespace

Presentation::Key TwistedBundle::key(const NerveTuple& g, const EZForm& x) const {
  Presentation::Key k = nerve_tuple_to_key(g);
  Presentation::Key tail = encode_ez_key(x);
  k.insert(k.end(), tail.begin(), tail.end());
  return k;
}

NerveTuple TwistedBundle::tuple_of(int dim, const Presentation::Key& k) const {
  const auto& H = twisting->group();
  Presentation::Key head(k.begin(), k.begin() + dim * H.rank());
  return nerve_key_to_tuple(H, dim, head);
}

EZForm TwistedBundle::base_of(int dim, const Presentation::Key& k) const {
  return decode_ez_key(k, dim * twisting->group().rank());
}

TwistedBundle twisted_product(const TwistingFunction& eta) {
  auto tw = std::make_shared<TwistingFunction>(eta);
  const auto X = tw->base();
  const auto H = tw->group();
  int rank = H.rank();

  Presentation p;
  p.max_dim = X->max_dim();
  p.simplices = [X, H](int d) {
    std::vector<Presentation::Key> out;
    auto forms = X->all_simplices(d);
    long tuples = H.tuple_count(d);
    out.reserve(forms.size() * tuples);
    for (long t = 0; t < tuples; ++t) {
      Presentation::Key head = nerve_tuple_to_key(H.tuple_at(d, t));
      for (const EZForm& e : forms) {
        Presentation::Key k = head;
        Presentation::Key tail = encode_ez_key(e);
        k.insert(k.end(), tail.begin(), tail.end());
        out.push_back(std::move(k));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  p.face = [X, H, rank, tw](int d, const Presentation::Key& k, int i) {
    NerveTuple g = nerve_key_to_tuple(H, d, {k.begin(), k.begin() + d * rank});
    EZForm x = decode_ez_key(k, d * rank);
    NerveTuple g2 = bundle_face_tuple(*tw, g, x, i);
    Presentation::Key out = nerve_tuple_to_key(g2);
    Presentation::Key tail = encode_ez_key(X->face_of(x, i));
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
  };
  p.degeneracy = [X, H, rank](int d, const Presentation::Key& k, int j) {
    NerveTuple g = nerve_key_to_tuple(H, d, {k.begin(), k.begin() + d * rank});
    EZForm x = decode_ez_key(k, d * rank);
    Presentation::Key out = nerve_tuple_to_key(H.nerve_degeneracy(g, j));
    Presentation::Key tail = encode_ez_key(X->degeneracy_of(x, j));
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
  };
  p.name = [X, H, rank](int d, const Presentation::Key& k) {
    NerveTuple g = nerve_key_to_tuple(H, d, {k.begin(), k.begin() + d * rank});
    EZForm x = decode_ez_key(k, d * rank);
    return "(" + H.tuple_str(g) + ";" + X->describe(x) + ")";
  };

  TwistedBundle out;
  out.twisting = tw;
  out.total = build_complex(p);
  return out;
}

Section::Section(std::shared_ptr<const TwistingFunction> tw, Cochain alpha)
    : tw_(std::move(tw)), alpha_(std::move(alpha)) {
  if (alpha_.degree() != 1)
    throw std::logic_error("a section is recorded by a 1-cochain");
}

NerveTuple Section::phi(const EZForm& e) const { return spine_tuple(alpha_, e); }

CheckReport Section::verify() const {
  CheckReport rep;
  const auto& X = alpha_.space();
  const auto& H = alpha_.group();
  for (int n = 1; n <= X->max_dim(); ++n) {
    for (const EZForm& e : X->all_simplices(n)) {
      NerveTuple v = phi(e);
      rep.count();
      NerveTuple lhs0 = H.tuple_add(H.nerve_face(v, 0), tw_->eta(e));
      if (!(lhs0 == phi(X->face_of(e, 0))))
        rep.fail("section d0 relation fails at " + X->describe(e));
      for (int i = 1; i <= n; ++i) {
        rep.count();
        if (!(H.nerve_face(v, i) == phi(X->face_of(e, i))))
          rep.fail("section d" + std::to_string(i) + " relation fails at " +
                   X->describe(e));
      }
      if (n < X->max_dim())
        for (int j = 0; j <= n; ++j) {
          rep.count();
          if (!(H.nerve_degeneracy(v, j) == phi(X->degeneracy_of(e, j))))
            rep.fail("section s" + std::to_string(j) + " relation fails at " +
                     X->describe(e));
        }
    }
  }
  return rep;
}

Section section_sum(const TwistingFunction& target, const Section& a,
                    const Section& b) {
  return Section(std::make_shared<TwistingFunction>(target),
                 a.alpha() + b.alpha());
}

std::vector<Section> sections(std::shared_ptr<const TwistingFunction> tw, long cap) {
  CoboundarySolver solver(tw->cocycle());
  if (!solver.solvable()) return {};
  std::vector<Section> out;
  for (Cochain& a : solver.all_solutions(cap)) out.emplace_back(tw, std::move(a));
  return out;
}

NerveTuple TwistingEquivalence::psi(const EZForm& e) const {
  return spine_tuple(alpha, e);
}

std::optional<TwistingEquivalence> twistings_equivalent(const TwistingFunction& eta,
                                                        const TwistingFunction& tau) {
  if (!eta.same_shape(tau))
    throw std::runtime_error("twistings live on different bundles");
  CoboundarySolver solver(eta.cocycle() - tau.cocycle());
  if (!solver.solvable()) return std::nullopt;
  TwistingEquivalence eq;
  eq.alpha = solver.least_solution();
  eq.from = &eta;
  eq.to = &tau;
  return eq;
}

CheckReport verify_equivalence(const TwistingEquivalence& eq) {
  CheckReport rep;
  const auto& X = eq.alpha.space();
  const auto& H = eq.alpha.group();
  for (int n = 0; n <= X->max_dim(); ++n) {
    for (const EZForm& e : X->all_simplices(n)) {
      NerveTuple v = eq.psi(e);
      if (n >= 1) {
        rep.count();
        NerveTuple lhs = H.tuple_add(H.nerve_face(v, 0), eq.from->eta(e));
        NerveTuple rhs =
            H.tuple_add(eq.to->eta(e), eq.psi(X->face_of(e, 0)));
        if (!(lhs == rhs)) rep.fail("psi d0 relation fails at " + X->describe(e));
        for (int i = 1; i <= n; ++i) {
          rep.count();
          if (!(H.nerve_face(v, i) == eq.psi(X->face_of(e, i))))
            rep.fail("psi d" + std::to_string(i) + " relation fails at " +
                     X->describe(e));
        }
      }
      if (n < X->max_dim())
        for (int j = 0; j <= n; ++j) {
          rep.count();
          if (!(H.nerve_degeneracy(v, j) == eq.psi(X->degeneracy_of(e, j))))
            rep.fail("psi s" + std::to_string(j) + " relation fails at " +
                     X->describe(e));
        }
    }
  }
  return rep;
}

namespace {

// Keys of W(NH) in dimension n: concatenated tuples (g_n, ..., g_0); W-bar
// drops the leading one.
struct WKeyCodec {
  FiniteAbelianGroup H;
  bool bar;

  std::vector<NerveTuple> decode(int dim, const Presentation::Key& k) const {
    std::vector<NerveTuple> parts;
    int top = bar ? dim - 1 : dim;
    size_t pos = 0;
    for (int t = top; t >= 0; --t) {
      Presentation::Key sub(k.begin() + pos, k.begin() + pos + t * H.rank());
      parts.push_back(nerve_key_to_tuple(H, t, sub));
      pos += t * H.rank();
    }
    return parts;
  }
  Presentation::Key encode(const std::vector<NerveTuple>& parts) const {
    Presentation::Key k;
    for (const auto& p : parts) {
      Presentation::Key sub = nerve_tuple_to_key(p);
      k.insert(k.end(), sub.begin(), sub.end());
    }
    return k;
  }
  std::vector<Presentation::Key> enumerate(int dim) const {
    int top = bar ? dim - 1 : dim;
    std::vector<Presentation::Key> out;
    std::vector<NerveTuple> parts;
    std::function<void(int)> rec = [&](int t) {
      if (t < 0) {
        out.push_back(encode(parts));
        return;
      }
      for (long i = 0; i < H.tuple_count(t); ++i) {
        parts.push_back(H.tuple_at(t, i));
        rec(t - 1);
        parts.pop_back();
      }
    };
    rec(top);
    std::sort(out.begin(), out.end());
    return out;
  }
};

std::vector<NerveTuple> w_face(const FiniteAbelianGroup& H,
                               const std::vector<NerveTuple>& parts, int i) {
  // parts = (g_n, ..., g_0)
  int n = static_cast<int>(parts.size()) - 1;
  std::vector<NerveTuple> out;
  if (i == n) {
    for (int t = 0; t <= n - 1; ++t) out.push_back(H.nerve_face(parts[t], n - t));
    return out;
  }
  for (int t = 0; t < i; ++t) out.push_back(H.nerve_face(parts[t], i - t));
  out.push_back(H.tuple_add(H.nerve_face(parts[i], 0), parts[i + 1]));
  for (int t = i + 2; t <= n; ++t) out.push_back(parts[t]);
  return out;
}

std::vector<NerveTuple> w_degeneracy(const FiniteAbelianGroup& H,
                                     const std::vector<NerveTuple>& parts, int i) {
  int n = static_cast<int>(parts.size()) - 1;
  std::vector<NerveTuple> out;
  for (int t = 0; t <= i; ++t) out.push_back(H.nerve_degeneracy(parts[t], i - t));
  out.push_back(H.tuple_zero(n - i));
  for (int t = i + 1; t <= n; ++t) out.push_back(parts[t]);
  return out;
}

std::vector<NerveTuple> wbar_face(const FiniteAbelianGroup& H,
                                  const std::vector<NerveTuple>& parts, int i) {
  // parts = (g_{n-1}, ..., g_0) in dimension n
  int n = static_cast<int>(parts.size());
  std::vector<NerveTuple> out;
  if (i == 0) {
    out.assign(parts.begin() + 1, parts.end());
    return out;
  }
  if (i == n) {
    for (int t = 0; t <= n - 2; ++t)
      out.push_back(H.nerve_face(parts[t], n - 1 - t));
    return out;
  }
  for (int t = 0; t < i - 1; ++t) out.push_back(H.nerve_face(parts[t], i - 1 - t));
  out.push_back(H.tuple_add(H.nerve_face(parts[i - 1], 0), parts[i]));
  for (int t = i + 1; t <= n - 1; ++t) out.push_back(parts[t]);
  return out;
}

std::vector<NerveTuple> wbar_degeneracy(const FiniteAbelianGroup& H,
                                        const std::vector<NerveTuple>& parts,
                                        int i) {
  int n = static_cast<int>(parts.size());
  std::vector<NerveTuple> out;
  if (i == 0) {
    out.push_back(H.tuple_zero(n));
    out.insert(out.end(), parts.begin(), parts.end());
    return out;
  }
  for (int t = 0; t <= i - 1; ++t)
    out.push_back(H.nerve_degeneracy(parts[t], i - 1 - t));
  out.push_back(H.tuple_zero(n - i));
  for (int t = i; t <= n - 1; ++t) out.push_back(parts[t]);
  return out;
}

BuiltComplex build_w(const FiniteAbelianGroup& H, int max_dim, bool bar) {
  WKeyCodec codec{H, bar};
  Presentation p;
  p.max_dim = max_dim;
  p.simplices = [codec](int d) { return codec.enumerate(d); };
  p.face = [codec, bar](int d, const Presentation::Key& k, int i) {
    auto parts = codec.decode(d, k);
    return codec.encode(bar ? wbar_face(codec.H, parts, i)
                            : w_face(codec.H, parts, i));
  };
  p.degeneracy = [codec, bar](int d, const Presentation::Key& k, int j) {
    auto parts = codec.decode(d, k);
    return codec.encode(bar ? wbar_degeneracy(codec.H, parts, j)
                            : w_degeneracy(codec.H, parts, j));
  };
  p.name = [codec](int d, const Presentation::Key& k) {
    auto parts = codec.decode(d, k);
    std::ostringstream os;
    os << "[";
    for (size_t t = 0; t < parts.size(); ++t) {
      if (t) os << "|";
      os << codec.H.tuple_str(parts[t]);
    }
    os << "]";
    return os.str();
  };
  return build_complex(p);
}

}  // namespace

BuiltComplex w_bar(const FiniteAbelianGroup& H, int max_dim) {
  return build_w(H, max_dim, true);
}

BuiltComplex w_total(const FiniteAbelianGroup& H, int max_dim) {
  return build_w(H, max_dim, false);
}

ClassifyingMapReport classifying_map_check(const TwistingFunction& eta) {
  ClassifyingMapReport out;
  const auto X = eta.base();
  const auto& H = eta.group();
  int md = X->max_dim();

  BuiltComplex W = w_total(H, md);
  BuiltComplex Wb = w_bar(H, md);
  out.w_simplicial = check_simplicial(*W.space);
  out.wbar_simplicial = check_simplicial(*Wb.space);

  WKeyCodec codec{H, false};
  WKeyCodec codec_bar{H, true};

  // theta-bar on an arbitrary simplex of X.
  auto theta_bar = [&](const EZForm& e) {
    int n = e.dim();
    std::vector<NerveTuple> parts;
    EZForm cur = e;
    for (int t = 0; t < n; ++t) {
      parts.push_back(eta.eta(cur));
      if (t + 1 < n) cur = X->face_of(cur, 0);
    }
    return codec_bar.encode(parts);
  };
  auto theta = [&](const NerveTuple& g, const EZForm& e) {
    std::vector<NerveTuple> parts{g};
    auto rest = codec_bar.decode(e.dim(), theta_bar(e));
    parts.insert(parts.end(), rest.begin(), rest.end());
    return codec.encode(parts);
  };

  // Simpliciality of theta-bar, at the level of raw W-bar keys.
  for (int n = 0; n <= md; ++n) {
    for (const EZForm& e : X->all_simplices(n)) {
      Presentation::Key w = theta_bar(e);
      for (int i = 0; i <= n && n >= 1; ++i) {
        out.theta_bar_simplicial.count();
        auto lhs = theta_bar(X->face_of(e, i));
        auto rhs = codec_bar.encode(wbar_face(H, codec_bar.decode(n, w), i));
        if (!(lhs == rhs))
          out.theta_bar_simplicial.fail("theta-bar does not commute with d" +
                                        std::to_string(i) + " at " +
                                        X->describe(e));
      }
      if (n < md)
        for (int j = 0; j <= n; ++j) {
          out.theta_bar_simplicial.count();
          auto lhs = theta_bar(X->degeneracy_of(e, j));
          auto rhs =
              codec_bar.encode(wbar_degeneracy(H, codec_bar.decode(n, w), j));
          if (!(lhs == rhs))
            out.theta_bar_simplicial.fail("theta-bar does not commute with s" +
                                          std::to_string(j) + " at " +
                                          X->describe(e));
        }
    }
  }

  // Simpliciality and equivariance of theta on the twisted product, plus the
  // fiberwise pullback comparison.
  for (int n = 0; n <= md; ++n) {
    for (const EZForm& e : X->all_simplices(n)) {
      Presentation::Key wb = theta_bar(e);
      std::vector<Presentation::Key> fiber;
      for (long t = 0; t < H.tuple_count(n); ++t) {
        NerveTuple g = H.tuple_at(n, t);
        Presentation::Key w = theta(g, e);
        // quotient drops the leading tuple
        Presentation::Key dropped(w.begin() + n * H.rank(), w.end());
        out.pullback_fibers.count();
        if (!(dropped == wb))
          out.pullback_fibers.fail("theta does not lie over theta-bar at " +
                                   X->describe(e));
        fiber.push_back(std::move(w));
        if (n >= 1) {
          for (int i = 0; i <= n; ++i) {
            out.theta_simplicial.count();
            auto lhs = theta(bundle_face_tuple(eta, g, e, i), X->face_of(e, i));
            auto rhs = codec.encode(w_face(H, codec.decode(n, fiber.back()), i));
            if (!(lhs == rhs))
              out.theta_simplicial.fail("theta does not commute with d" +
                                        std::to_string(i) + " at " +
                                        X->describe(e));
          }
        }
        if (n < md)
          for (int j = 0; j <= n; ++j) {
            out.theta_simplicial.count();
            auto lhs = theta(H.nerve_degeneracy(g, j), X->degeneracy_of(e, j));
            auto rhs =
                codec.encode(w_degeneracy(H, codec.decode(n, fiber.back()), j));
            if (!(lhs == rhs))
              out.theta_simplicial.fail("theta does not commute with s" +
                                        std::to_string(j) + " at " +
                                        X->describe(e));
          }
      }
      std::sort(fiber.begin(), fiber.end());
      out.pullback_fibers.count();
      if (std::adjacent_find(fiber.begin(), fiber.end()) != fiber.end())
        out.pullback_fibers.fail("theta is not injective on the fiber over " +
                                 X->describe(e));
    }
  }
  return out;
}

}  // namespace twistlab
