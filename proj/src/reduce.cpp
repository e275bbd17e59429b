#include "twistlab/reduce.hpp"

namespace twistlab {

namespace {

// Parent simplex of a non-degenerate quotient simplex (never the basepoint
// class in dimensions >= 1).
SimplexId quotient_preimage(const Quotient& q, SimplexId s) {
  const auto& key = q.built.nondeg_keys[s.dim][s.index];
  if (key.size() == 1 && key[0] == -1)
    throw std::logic_error("basepoint class has no preimage simplex");
  return SimplexId{static_cast<int>(key[0]), static_cast<int>(key[1])};
}

}  // namespace

CollapseContext make_collapse(std::shared_ptr<const TwistingFunction> tw,
                              const SubComplex& Z) {
  CollapseContext ctx;
  ctx.X = tw->base();
  ctx.Z = Z;
  ctx.twisting = tw;
  ctx.Zmat = materialize(Z);

  Cochain restricted = pull_back(tw->cocycle(), ctx.Zmat.inclusion);
  auto nu = solve_trivialization(restricted);
  if (!nu)
    throw std::runtime_error(
        "subcomplex obstruction nontrivial: the restricted class does not vanish");
  ctx.nu = *nu;

  const auto& H = tw->group();
  ctx.nu_tilde = Cochain(ctx.X, H, 1);
  for (int i = 0; i < ctx.Zmat.built.space->count(1); ++i) {
    SimplexId parent = ctx.Zmat.inclusion.image[1][i].base;
    ctx.nu_tilde.set(parent, ctx.nu.value(i));
  }

  ctx.shifted = std::make_shared<TwistingFunction>(TwistingFunction::from_cocycle(
      tw->cocycle() - coboundary(ctx.nu_tilde)));

  ctx.quot = quotient(ctx.X, Z);
  const auto& Q = ctx.quot.built.space;
  Cochain beta_bar(Q, H, 2);
  for (int i = 0; i < Q->count(2); ++i)
    beta_bar.set(i, ctx.shifted->cocycle().value(
                        quotient_preimage(ctx.quot, SimplexId{2, i}).index));
  if (!(pull_back(beta_bar, ctx.quot.projection) == ctx.shifted->cocycle()))
    throw std::logic_error("induced cocycle does not pull back to the shift");
  ctx.collapsed =
      std::make_shared<TwistingFunction>(TwistingFunction::from_cocycle(beta_bar));
  return ctx;
}

TwistedDistribution collapse_forward(const CollapseContext& ctx,
                                     const TwistedDistribution& p) {
  if (p.twisting()->base().get() != ctx.X.get() ||
      !(p.twisting()->cocycle() == ctx.twisting->cocycle()))
    throw std::runtime_error("collapse_forward: distribution has the wrong twisting");
  const auto& H = ctx.twisting->group();

  // The restriction to Z must be the deterministic point of nu.
  auto twZ = std::make_shared<TwistingFunction>(TwistingFunction::from_cocycle(
      pull_back(ctx.twisting->cocycle(), ctx.Zmat.inclusion)));
  Section phi_nu(twZ, ctx.nu);
  const auto& Zs = ctx.Zmat.built.space;
  for (int d = 1; d <= Zs->max_dim(); ++d)
    for (int idx = 0; idx < Zs->count(d); ++idx) {
      EZForm in_parent = ctx.Zmat.inclusion.image[d][idx];
      DistributionVector got = p.expand(in_parent);
      long want = H.tuple_index(phi_nu.phi(EZForm{SimplexId{d, idx}}));
      if (got.point_index() != want)
        throw std::runtime_error(
            "collapse_forward: restriction is not the chosen deterministic point "
            "at subcomplex simplex " +
            Zs->name(SimplexId{d, idx}));
    }

  // Shift into the nu = 0 regime, then transport through the projection.
  auto tw_shift = std::make_shared<TwistingFunction>(
      TwistingFunction::from_cocycle(coboundary(-ctx.nu_tilde)));
  TwistedDistribution q =
      convolve(p, delta_distribution(Section(tw_shift, -ctx.nu_tilde)));

  const auto& Q = ctx.quot.built.space;
  TwistedDistribution pbar(ctx.collapsed);
  for (int d = 1; d <= Q->max_dim(); ++d)
    for (int idx = 0; idx < Q->count(d); ++idx)
      pbar.at(SimplexId{d, idx}) =
          q.at(quotient_preimage(ctx.quot, SimplexId{d, idx}));
  CheckReport rep = validate(pbar);
  if (!rep.ok)
    throw std::logic_error("collapse_forward produced an invalid distribution: " +
                           rep.first_violation);
  return pbar;
}

TwistedDistribution collapse_backward(const CollapseContext& ctx,
                                      const TwistedDistribution& pbar) {
  if (pbar.twisting()->base().get() != ctx.quot.built.space.get() ||
      !(pbar.twisting()->cocycle() == ctx.collapsed->cocycle()))
    throw std::runtime_error("collapse_backward: distribution has the wrong twisting");
  const auto& H = ctx.twisting->group();
  const auto& X = ctx.X;

  TwistedDistribution q(ctx.shifted);
  for (int d = 1; d <= X->max_dim(); ++d)
    for (int idx = 0; idx < X->count(d); ++idx) {
      SimplexId s{d, idx};
      if (ctx.Z.contains(s)) {
        q.at(s) = DistributionVector::point(H.tuple_count(d),
                                            H.tuple_index(H.tuple_zero(d)));
        continue;
      }
      EZForm img = ctx.quot.projection.image[d][idx];
      q.at(s) = pbar.at(img.base);
    }
  CheckReport rep = validate(q);
  if (!rep.ok)
    throw std::logic_error("collapse_backward produced an invalid distribution: " +
                           rep.first_violation);

  auto tw_shift = std::make_shared<TwistingFunction>(
      TwistingFunction::from_cocycle(coboundary(ctx.nu_tilde)));
  TwistedDistribution conv =
      convolve(q, delta_distribution(Section(tw_shift, ctx.nu_tilde)));
  TwistedDistribution p(ctx.twisting);
  for (int d = 1; d <= X->max_dim(); ++d)
    for (int idx = 0; idx < X->count(d); ++idx)
      p.at(SimplexId{d, idx}) = conv.at(SimplexId{d, idx});
  return p;
}

bool is_trivializing(const SimplicialMap& f, const Cochain& gamma) {
  return solve_trivialization(pull_back(gamma, f)).has_value();
}

}  // namespace twistlab
