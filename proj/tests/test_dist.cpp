#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "twistlab/geometry.hpp"

using namespace twistlab;
using namespace twistlab::testing;

namespace {

TwistedDistribution sample(const std::shared_ptr<const TwistingFunction>& tw,
                           std::mt19937_64& rng) {
  auto p = sample_distribution(build_hrep(tw), rng);
  REQUIRE(p);
  REQUIRE(validate(*p).ok);
  return *p;
}

}  // namespace

TEST_CASE("validate") {
  auto s = load_mermin();

  SUBCASE("the uniform family is valid for any twisting") {
    CHECK(validate(s.distributions.at("uniform").dist).ok);
  }

  SUBCASE("deltas on sections are valid") {
    for (const auto& sec : sections(s.twisting("zero")))
      CHECK(validate(delta_distribution(sec)).ok);
  }

  SUBCASE("perturbing one weight is reported with the face") {
    TwistedDistribution p = s.distributions.at("uniform").dist;
    SimplexId sigma = *s.space->find(2, "sigma");
    p.at(sigma).w[0] += Rational(1, 100);
    p.at(sigma).w[1] -= Rational(1, 100);
    CheckReport rep = validate(p);
    CHECK_FALSE(rep.ok);
    CHECK(rep.first_violation.find("sigma") != std::string::npos);
    CHECK(rep.first_violation.find("marginal mismatch") != std::string::npos);
  }

  SUBCASE("negative weights and broken sums are caught") {
    TwistedDistribution p = s.distributions.at("uniform").dist;
    SimplexId f = *s.space->find(1, "f");
    p.at(f).w[0] = Rational(3, 2);
    p.at(f).w[1] = Rational(-1, 2);
    CHECK_FALSE(validate(p).ok);
  }
}

TEST_CASE("classical embedding") {
  auto s = load_mermin();
  auto tw = s.twisting("zero");
  auto secs = sections(tw);
  REQUIRE(secs.size() == 16);

  SUBCASE("a point mass embeds as the delta") {
    for (size_t k = 0; k < 3; ++k) {
      RatVec lambda(secs.size(), 0);
      lambda[k] = 1;
      CHECK(classical_embed(tw, secs, lambda) == delta_distribution(secs[k]));
    }
  }

  SUBCASE("uniform weights give the uniform point on every context") {
    RatVec lambda(secs.size(), Rational(1, 16));
    TwistedDistribution p = classical_embed(tw, secs, lambda);
    CHECK(validate(p).ok);
    // Direct expansion oracle: average the 16 deltas coordinatewise.
    for (int d = 1; d <= 2; ++d)
      for (int i = 0; i < s.space->count(d); ++i) {
        DistributionVector want =
            DistributionVector::zero(tw->group().tuple_count(d));
        for (const auto& sec : secs) {
          auto dd = delta_distribution(sec);
          for (size_t t = 0; t < want.w.size(); ++t)
            want.w[t] += dd.at(SimplexId{d, i}).w[t] / 16;
        }
        CHECK(p.at(SimplexId{d, i}) == want);
      }
  }

  SUBCASE("Theta is affine") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
      RatVec l1(secs.size(), 0), l2(secs.size(), 0);
      for (size_t k = 0; k < secs.size(); ++k) {
        l1[k] = rat(static_cast<long>(rng() % 5));
        l2[k] = rat(static_cast<long>(rng() % 5));
      }
      Rational s1 = 0, s2 = 0;
      for (const auto& v : l1) s1 += v;
      for (const auto& v : l2) s2 += v;
      if (s1 == 0 || s2 == 0) continue;
      for (auto& v : l1) v /= s1;
      for (auto& v : l2) v /= s2;
      RatVec mix(secs.size());
      for (size_t k = 0; k < secs.size(); ++k) mix[k] = (l1[k] + l2[k]) / 2;
      TwistedDistribution lhs = classical_embed(tw, secs, mix);
      TwistedDistribution p1 = classical_embed(tw, secs, l1);
      TwistedDistribution p2 = classical_embed(tw, secs, l2);
      bool equal = true;
      for (int d = 1; d <= 2 && equal; ++d)
        for (int i = 0; i < s.space->count(d) && equal; ++i) {
          const auto& a = lhs.at(SimplexId{d, i});
          const auto& b1 = p1.at(SimplexId{d, i});
          const auto& b2 = p2.at(SimplexId{d, i});
          for (size_t t = 0; t < a.w.size(); ++t)
            if (a.w[t] != (b1.w[t] + b2.w[t]) / 2) equal = false;
        }
      CHECK(equal);
    }
  }

  SUBCASE("an empty section set is refused") {
    auto twb = s.twisting("beta");
    CHECK_THROWS_WITH_AS(classical_embed(twb, {}, {}),
                         doctest::Contains("no sections"), std::runtime_error);
  }
}

TEST_CASE("convolution") {
  std::mt19937_64 rng(13);
  auto s = load_mermin();
  auto M = s.space;
  FiniteAbelianGroup Z2({2});
  auto tw0 = s.twisting("zero");
  auto twb = s.twisting("beta");

  SUBCASE("unit law with the zero-section delta") {
    Section zero_section(tw0, Cochain(M, Z2, 1));
    TwistedDistribution unit = delta_distribution(zero_section);
    for (int trial = 0; trial < 5; ++trial) {
      TwistedDistribution p = sample(twb, rng);
      TwistedDistribution q = convolve(p, unit);
      CHECK(q.twisting()->cocycle() == twb->cocycle());
      CHECK(vectorize(build_hrep(twb), p) == vectorize(build_hrep(twb), q));
    }
  }

  SUBCASE("deltas convolve to the delta of the section sum") {
    auto secs = sections(tw0);
    for (int trial = 0; trial < 5; ++trial) {
      const Section& a = secs[rng() % secs.size()];
      const Section& b = secs[rng() % secs.size()];
      TwistedDistribution lhs = convolve(delta_distribution(a), delta_distribution(b));
      Section sum = section_sum(tensor(*tw0, *tw0), a, b);
      TwistedDistribution rhs = delta_distribution(sum);
      CHECK(vectorize(build_hrep(lhs.twisting()), lhs) ==
            vectorize(build_hrep(rhs.twisting()), rhs));
    }
  }

  SUBCASE("commutativity and associativity on random twisted inputs") {
    for (int trial = 0; trial < 5; ++trial) {
      TwistedDistribution p = sample(twb, rng);
      TwistedDistribution q = sample(tw0, rng);
      TwistedDistribution r = sample(twb, rng);
      TwistedDistribution pq = convolve(p, q);
      TwistedDistribution qp = convolve(q, p);
      PolytopeH P = build_hrep(pq.twisting());
      CHECK(vectorize(P, pq) == vectorize(P, qp));
      TwistedDistribution abc1 = convolve(convolve(p, q), r);
      TwistedDistribution abc2 = convolve(p, convolve(q, r));
      PolytopeH P2 = build_hrep(abc1.twisting());
      CHECK(vectorize(P2, abc1) == vectorize(P2, abc2));
      CHECK(validate(abc1).ok);
    }
  }

  SUBCASE("Theta intertwines convolution") {
    auto secs = sections(tw0);
    for (int trial = 0; trial < 3; ++trial) {
      RatVec l1(secs.size(), 0), l2(secs.size(), 0);
      l1[rng() % secs.size()] = Rational(1, 2);
      l1[rng() % secs.size()] += Rational(1, 2);
      l2[rng() % secs.size()] = Rational(1, 3);
      l2[rng() % secs.size()] += Rational(2, 3);
      TwistedDistribution lhs =
          convolve(classical_embed(tw0, secs, l1), classical_embed(tw0, secs, l2));
      // ell(l1, l2): push the product measure along section addition.
      auto sum_tw = std::make_shared<TwistingFunction>(tensor(*tw0, *tw0));
      auto sum_secs = sections(sum_tw);
      RatVec ell(sum_secs.size(), 0);
      for (size_t a = 0; a < secs.size(); ++a)
        for (size_t b = 0; b < secs.size(); ++b) {
          if (l1[a] == 0 || l2[b] == 0) continue;
          Cochain target = secs[a].alpha() + secs[b].alpha();
          for (size_t k = 0; k < sum_secs.size(); ++k)
            if (sum_secs[k].alpha() == target) ell[k] += l1[a] * l2[b];
        }
      TwistedDistribution rhs = classical_embed(sum_tw, sum_secs, ell);
      PolytopeH P = build_hrep(lhs.twisting());
      CHECK(vectorize(P, lhs) == vectorize(P, rhs));
    }
  }
}

TEST_CASE("restriction along maps") {
  std::mt19937_64 rng(19);
  auto s = load_mermin();
  auto twb = s.twisting("beta");

  SUBCASE("identity restriction") {
    TwistedDistribution p = sample(twb, rng);
    auto id = SimplicialMap::identity(s.space);
    TwistedDistribution q = restrict_along(p, id);
    PolytopeH P = build_hrep(twb);
    CHECK(vectorize(P, p) == vectorize(P, restrict_along(p, id)));
    CHECK(validate(q).ok);
  }

  SUBCASE("restriction to U produces the three edge marginals") {
    auto Um = materialize(s.subcomplexes.at("U"));
    TwistedDistribution p = sample(twb, rng);
    TwistedDistribution q = restrict_along(p, Um.inclusion);
    CHECK(validate(q).ok);
    for (int i = 0; i < Um.built.space->count(1); ++i) {
      EZForm parent = Um.inclusion.image[1][i];
      CHECK(q.at(SimplexId{1, i}) == p.at(parent.base));
    }
  }

  SUBCASE("restriction is functorial") {
    // V -> M and the edge v -> V compose.
    auto Vm = materialize(s.subcomplexes.at("V"));
    auto vsub = SubComplex::closure(Vm.built.space,
                                    {*Vm.built.space->find(1, "v")});
    auto vm = materialize(vsub);
    TwistedDistribution p = sample(twb, rng);
    TwistedDistribution two_step =
        restrict_along(restrict_along(p, Vm.inclusion), vm.inclusion);
    TwistedDistribution one_step =
        restrict_along(p, compose_maps(Vm.inclusion, vm.inclusion));
    PolytopeH P = build_hrep(two_step.twisting());
    CHECK(vectorize(P, two_step) ==
          vectorize(build_hrep(one_step.twisting()), one_step));
  }
}

TEST_CASE("equivariant correspondence") {
  std::mt19937_64 rng(29);
  auto s = load_mermin();
  auto twb = s.twisting("beta");
  auto tw0 = s.twisting("zero");

  SUBCASE("round trip is the identity on random valid distributions") {
    for (int trial = 0; trial < 4; ++trial) {
      TwistedDistribution p = sample(twb, rng);
      EquivariantDistribution q = to_equivariant(p);
      CHECK(validate_equivariant(q).ok);
      CHECK(from_equivariant(q) == p);
    }
  }

  SUBCASE("the zero-section delta has the delta fibers") {
    Section zs(tw0, Cochain(s.space, FiniteAbelianGroup({2}), 1));
    EquivariantDistribution q = to_equivariant(delta_distribution(zs));
    const auto& H = q.carrier.twisting->group();
    // Over the zero fiber point the distribution is the point mass at 0.
    for (int i = 0; i < s.space->count(1); ++i) {
      auto key = q.carrier.key(H.tuple_zero(1), EZForm{SimplexId{1, i}});
      EZForm e = q.carrier.total.ez_of(1, key);
      CHECK(q.expand(e).point_index() == H.tuple_index(H.tuple_zero(1)));
    }
  }

  SUBCASE("injectivity on distinct inputs") {
    for (int trial = 0; trial < 4; ++trial) {
      TwistedDistribution p1 = sample(twb, rng);
      TwistedDistribution p2 = sample(twb, rng);
      if (p1 == p2) continue;
      EquivariantDistribution q1 = to_equivariant(p1);
      EquivariantDistribution q2 = to_equivariant(p2);
      CHECK_FALSE(q1.q == q2.q);
    }
  }

  SUBCASE("non-equivariant input is rejected") {
    TwistedDistribution p = sample(twb, rng);
    EquivariantDistribution q = to_equivariant(p);
    // Corrupt one fiber away from its orbit relation.
    auto& vec = q.q[2][0].w;
    std::swap(vec[0], vec[1]);
    bool broken = !validate_equivariant(q).ok;
    CHECK(broken);
    if (broken) CHECK_THROWS(from_equivariant(q));
  }
}

TEST_CASE("top-dimensional data determines the family") {
  // Building a distribution from maximal-simplex data alone reproduces all
  // lower marginals consistently.
  std::mt19937_64 rng(37);
  auto s = load_mermin();
  auto twb = s.twisting("beta");
  PolytopeH P = build_hrep(twb);
  TwistedDistribution p = sample(twb, rng);
  TwistedDistribution rebuilt = devectorize(P, vectorize(P, p));
  CHECK(rebuilt == p);
  CHECK(validate(rebuilt).ok);
}
