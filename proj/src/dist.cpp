#include "twistlab/dist.hpp"

#include <stdexcept>

namespace twistlab {

Rational DistributionVector::sum() const {
  Rational s = 0;
  for (const auto& x : w) s += x;
  return s;
}

bool DistributionVector::is_point() const { return point_index() >= 0; }

long DistributionVector::point_index() const {
  long at = -1;
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0) continue;
    if (w[i] != 1 || at >= 0) return -1;
    at = static_cast<long>(i);
  }
  return at;
}

TwistedDistribution::TwistedDistribution(std::shared_ptr<const TwistingFunction> tw)
    : tw_(std::move(tw)) {
  const auto& X = tw_->base();
  const auto& H = tw_->group();
  table_.resize(X->max_dim() + 1);
  for (int d = 0; d <= X->max_dim(); ++d)
    table_[d].assign(X->count(d), DistributionVector::zero(H.tuple_count(d)));
  for (int idx = 0; idx < X->count(0); ++idx)
    table_[0][idx].w[0] = 1;  // the fiber over a vertex is a single point
}

DistributionVector TwistedDistribution::expand(const EZForm& e) const {
  const auto& H = tw_->group();
  const DistributionVector& basev = table_[e.base.dim][e.base.index];
  if (!e.is_degenerate()) return basev;
  DistributionVector out = DistributionVector::zero(H.tuple_count(e.dim()));
  long n = H.tuple_count(e.base.dim);
  for (long t = 0; t < n; ++t) {
    if (basev.w[t] == 0) continue;
    NerveTuple g = H.tuple_at(e.base.dim, t);
    for (int j : e.degens) g = H.nerve_degeneracy(g, j);
    out.w[H.tuple_index(g)] += basev.w[t];
  }
  return out;
}

bool TwistedDistribution::operator==(const TwistedDistribution& o) const {
  return base().get() == o.base().get() && table_ == o.table_;
}

DistributionVector marginal(const TwistingFunction& tw, const DistributionVector& v,
                            const EZForm& x, int i) {
  const auto& H = tw.group();
  int n = x.dim();
  DistributionVector out = DistributionVector::zero(H.tuple_count(n - 1));
  for (long t = 0; t < H.tuple_count(n); ++t) {
    if (v.w[t] == 0) continue;
    NerveTuple g = H.tuple_at(n, t);
    out.w[H.tuple_index(bundle_face_tuple(tw, g, x, i))] += v.w[t];
  }
  return out;
}

CheckReport validate(const TwistedDistribution& p) {
  CheckReport rep;
  const auto& X = p.base();
  const auto& tw = *p.twisting();
  for (int d = 1; d <= X->max_dim(); ++d) {
    for (int idx = 0; idx < X->count(d); ++idx) {
      SimplexId s{d, idx};
      const DistributionVector& v = p.at(s);
      rep.count();
      for (const Rational& x : v.w)
        if (x < 0) {
          rep.fail("negative weight on " + X->name(s));
          break;
        }
      if (v.sum() != 1) {
        rep.fail("weights on " + X->name(s) + " do not sum to 1");
        continue;
      }
      for (int i = 0; i <= d; ++i) {
        rep.count();
        DistributionVector lhs = marginal(tw, v, EZForm{s}, i);
        DistributionVector rhs = p.expand(X->face(s, i));
        if (!(lhs == rhs))
          rep.fail("marginal mismatch at d" + std::to_string(i) + " of " +
                   X->name(s));
      }
    }
  }
  return rep;
}

TwistedDistribution delta_distribution(const Section& s) {
  const auto& tw = s.twisting();
  const auto& H = tw->group();
  TwistedDistribution p(tw);
  const auto& X = tw->base();
  for (int d = 1; d <= X->max_dim(); ++d)
    for (int idx = 0; idx < X->count(d); ++idx)
      p.at(SimplexId{d, idx}) = DistributionVector::point(
          H.tuple_count(d), H.tuple_index(s.phi(EZForm{SimplexId{d, idx}})));
  return p;
}

TwistedDistribution classical_embed(std::shared_ptr<const TwistingFunction> tw,
                                    const std::vector<Section>& secs,
                                    const RatVec& lambda) {
  if (secs.empty()) throw std::runtime_error("bundle has no sections");
  if (secs.size() != lambda.size())
    throw std::logic_error("classical_embed: weight count mismatch");
  Rational total = 0;
  for (const auto& l : lambda) {
    if (l < 0) throw std::runtime_error("classical_embed: negative weight");
    total += l;
  }
  if (total != 1) throw std::runtime_error("classical_embed: weights must sum to 1");
  const auto& H = tw->group();
  const auto& X = tw->base();
  TwistedDistribution p(tw);
  for (int d = 1; d <= X->max_dim(); ++d)
    for (int idx = 0; idx < X->count(d); ++idx) {
      DistributionVector v = DistributionVector::zero(H.tuple_count(d));
      for (size_t k = 0; k < secs.size(); ++k)
        v.w[H.tuple_index(secs[k].phi(EZForm{SimplexId{d, idx}}))] += lambda[k];
      p.at(SimplexId{d, idx}) = std::move(v);
    }
  return p;
}

TwistedDistribution convolve(const TwistedDistribution& p,
                             const TwistedDistribution& q) {
  if (p.base().get() != q.base().get())
    throw std::runtime_error("convolve: distributions on different bases");
  auto tw = std::make_shared<TwistingFunction>(
      tensor(*p.twisting(), *q.twisting()));
  const auto& H = tw->group();
  const auto& X = tw->base();
  TwistedDistribution out(tw);
  for (int d = 1; d <= X->max_dim(); ++d)
    for (int idx = 0; idx < X->count(d); ++idx) {
      SimplexId s{d, idx};
      DistributionVector v = DistributionVector::zero(H.tuple_count(d));
      long n = H.tuple_count(d);
      for (long a = 0; a < n; ++a) {
        if (p.at(s).w[a] == 0) continue;
        NerveTuple ta = H.tuple_at(d, a);
        for (long b = 0; b < n; ++b) {
          if (q.at(s).w[b] == 0) continue;
          v.w[H.tuple_index(H.tuple_add(ta, H.tuple_at(d, b)))] +=
              p.at(s).w[a] * q.at(s).w[b];
        }
      }
      out.at(s) = std::move(v);
    }
  return out;
}

TwistedDistribution restrict_along(const TwistedDistribution& p,
                                   const SimplicialMap& f) {
  if (f.dst.get() != p.base().get())
    throw std::logic_error("restrict_along: map does not land in the base");
  auto tw = std::make_shared<TwistingFunction>(
      TwistingFunction::from_cocycle(pull_back(p.twisting()->cocycle(), f)));
  TwistedDistribution out(tw);
  const auto& Y = f.src;
  for (int d = 1; d <= Y->max_dim(); ++d)
    for (int idx = 0; idx < Y->count(d); ++idx)
      out.at(SimplexId{d, idx}) = p.expand(f.apply(EZForm{SimplexId{d, idx}}));
  return out;
}

DistributionVector EquivariantDistribution::expand(const EZForm& e) const {
  const auto& H = carrier.twisting->group();
  const DistributionVector& basev = q[e.base.dim][e.base.index];
  if (!e.is_degenerate()) return basev;
  DistributionVector out = DistributionVector::zero(H.tuple_count(e.dim()));
  for (long t = 0; t < H.tuple_count(e.base.dim); ++t) {
    if (basev.w[t] == 0) continue;
    NerveTuple g = H.tuple_at(e.base.dim, t);
    for (int j : e.degens) g = H.nerve_degeneracy(g, j);
    out.w[H.tuple_index(g)] += basev.w[t];
  }
  return out;
}

EquivariantDistribution to_equivariant(const TwistedDistribution& p) {
  EquivariantDistribution out;
  out.carrier = twisted_product(inverse(*p.twisting()));
  const auto& F = *out.carrier.total.space;
  const auto& H = p.group();
  out.q.resize(F.max_dim() + 1);
  for (int d = 0; d <= F.max_dim(); ++d) {
    out.q[d].reserve(F.count(d));
    for (int idx = 0; idx < F.count(d); ++idx) {
      const auto& key = out.carrier.total.key_of(SimplexId{d, idx});
      NerveTuple k = out.carrier.tuple_of(d, key);
      EZForm x = out.carrier.base_of(d, key);
      DistributionVector px = p.expand(x);
      DistributionVector v = DistributionVector::zero(H.tuple_count(d));
      for (long h = 0; h < H.tuple_count(d); ++h)
        v.w[h] = px.w[H.tuple_index(H.tuple_sub(H.tuple_at(d, h), k))];
      out.q[d].push_back(std::move(v));
    }
  }
  return out;
}

CheckReport validate_equivariant(const EquivariantDistribution& qd) {
  CheckReport rep;
  const auto& F = *qd.carrier.total.space;
  const auto& H = qd.carrier.twisting->group();
  for (int d = 0; d <= F.max_dim(); ++d) {
    for (int idx = 0; idx < F.count(d); ++idx) {
      SimplexId s{d, idx};
      const DistributionVector& v = qd.q[d][idx];
      rep.count();
      for (const Rational& x : v.w)
        if (x < 0) {
          rep.fail("negative weight on " + F.name(s));
          break;
        }
      if (v.sum() != 1) {
        rep.fail("weights on " + F.name(s) + " do not sum to 1");
        continue;
      }
      // Simpliciality: the outcome space K carries the untwisted structure.
      for (int i = 0; i <= d && d >= 1; ++i) {
        rep.count();
        DistributionVector lhs = DistributionVector::zero(H.tuple_count(d - 1));
        for (long t = 0; t < H.tuple_count(d); ++t) {
          if (v.w[t] == 0) continue;
          lhs.w[H.tuple_index(H.nerve_face(H.tuple_at(d, t), i))] += v.w[t];
        }
        if (!(lhs == qd.expand(F.face(s, i))))
          rep.fail("equivariant family not simplicial at d" + std::to_string(i) +
                   " of " + F.name(s));
      }
      // Equivariance: shifting the fiber coordinate convolves by a delta.
      const auto& key = qd.carrier.total.key_of(s);
      NerveTuple k = qd.carrier.tuple_of(d, key);
      EZForm x = qd.carrier.base_of(d, key);
      for (long gi = 0; gi < H.tuple_count(d); ++gi) {
        NerveTuple g = H.tuple_at(d, gi);
        auto shifted_key = qd.carrier.key(H.tuple_add(g, k), x);
        DistributionVector got =
            qd.expand(qd.carrier.total.ez_of(d, shifted_key));
        rep.count();
        DistributionVector want = DistributionVector::zero(H.tuple_count(d));
        for (long h = 0; h < H.tuple_count(d); ++h)
          want.w[h] = v.w[H.tuple_index(H.tuple_sub(H.tuple_at(d, h), g))];
        if (!(got == want)) {
          rep.fail("equivariance fails at " + F.name(s));
          break;
        }
      }
    }
  }
  return rep;
}

TwistedDistribution from_equivariant(const EquivariantDistribution& qd) {
  CheckReport rep = validate_equivariant(qd);
  if (!rep.ok)
    throw std::runtime_error("from_equivariant: " + rep.first_violation);
  auto tw = std::make_shared<TwistingFunction>(
      inverse(*qd.carrier.twisting));  // carrier twists by the inverse
  const auto& X = tw->base();
  const auto& H = tw->group();
  TwistedDistribution p(tw);
  for (int d = 1; d <= X->max_dim(); ++d)
    for (int idx = 0; idx < X->count(d); ++idx) {
      auto key = qd.carrier.key(H.tuple_zero(d), EZForm{SimplexId{d, idx}});
      EZForm in_carrier = qd.carrier.total.ez_of(d, key);
      p.at(SimplexId{d, idx}) = qd.expand(in_carrier);
    }
  return p;
}

}  // namespace twistlab
