#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "twistlab/reduce.hpp"

using namespace twistlab;
using namespace twistlab::testing;

TEST_CASE("make_collapse") {
  auto s = load_mermin();

  SUBCASE("a single edge of the triangle needs no correction") {
    auto d2 = standard_simplex(2, 3);
    std::mt19937_64 rng(3);
    FiniteAbelianGroup Z2({2});
    auto tw = std::make_shared<TwistingFunction>(
        TwistingFunction::from_cocycle(random_cocycle(d2, Z2, rng)));
    auto Z = SubComplex::closure(d2, {*d2->find(1, "0,1")});
    CollapseContext ctx = make_collapse(tw, Z);
    CHECK(ctx.nu.is_zero());  // no 2-simplices in Z
    CHECK(ctx.nu_tilde.is_zero());
  }

  SUBCASE("U is 1-dimensional, so nu = 0 is admissible") {
    CollapseContext ctx = make_collapse(s.twisting("beta"), s.subcomplexes.at("U"));
    CHECK(ctx.nu.is_zero());
    CHECK(check_simplicial(*ctx.quot.built.space).ok);
  }

  SUBCASE("V carries beta|_V = d(nu) with a nonzero nu") {
    CollapseContext ctx = make_collapse(s.twisting("beta"), s.subcomplexes.at("V"));
    CHECK_FALSE(ctx.nu.is_zero());
    CHECK(coboundary(ctx.nu) ==
          pull_back(s.cochain("beta"), ctx.Zmat.inclusion));
    // nu is the lexicographically least solution over V's five edges.
    CoboundarySolver solver(pull_back(s.cochain("beta"), ctx.Zmat.inclusion));
    for (const auto& other : solver.all_solutions(1 << 12)) {
      bool less = false, greater = false;
      for (int i = 0; i < ctx.Zmat.built.space->count(1) && !less && !greater;
           ++i) {
        if (ctx.nu.value(i) < other.value(i)) less = true;
        if (ctx.nu.value(i) > other.value(i)) greater = true;
      }
      CHECK_FALSE(greater);
    }
  }

  SUBCASE("a nontrivial obstruction is refused") {
    CHECK_THROWS_WITH_AS(
        make_collapse(s.twisting("beta"), SubComplex::whole(s.space)),
        doctest::Contains("obstruction nontrivial"), std::runtime_error);
  }
}

TEST_CASE("collapse round trips") {
  std::mt19937_64 rng(11);

  auto run_roundtrip = [&](const Scenario& s, const std::string& coch,
                           const std::string& sub, int trials) {
    CollapseContext ctx =
        make_collapse(s.twisting(coch), s.subcomplexes.at(sub));
    PolytopeH PQ = build_hrep(ctx.collapsed);
    for (int t = 0; t < trials; ++t) {
      auto pbar = sample_distribution(PQ, rng);
      REQUIRE(pbar);
      TwistedDistribution up = collapse_backward(ctx, *pbar);
      CHECK(validate(up).ok);
      TwistedDistribution down = collapse_forward(ctx, up);
      CHECK(down == *pbar);
      TwistedDistribution up2 = collapse_backward(ctx, down);
      CHECK(up2 == up);
    }
  };

  SUBCASE("glued triangles along the shared edge") {
    run_roundtrip(load_glued(), "g1", "shared", 10);
  }
  SUBCASE("Mermin with Z = V") { run_roundtrip(load_mermin(), "beta", "V", 10); }
}

TEST_CASE("both directions are affine") {
  std::mt19937_64 rng(13);
  auto s = load_mermin();
  CollapseContext ctx = make_collapse(s.twisting("beta"), s.subcomplexes.at("V"));
  PolytopeH PQ = build_hrep(ctx.collapsed);
  PolytopeH PX = build_hrep(ctx.twisting);
  for (int t = 0; t < 5; ++t) {
    auto p1 = sample_distribution(PQ, rng);
    auto p2 = sample_distribution(PQ, rng);
    REQUIRE(p1);
    REQUIRE(p2);
    RatVec v1 = vectorize(PQ, *p1), v2 = vectorize(PQ, *p2);
    RatVec mid(v1.size());
    for (size_t j = 0; j < v1.size(); ++j) mid[j] = (v1[j] + v2[j]) / 2;
    TwistedDistribution pmid = devectorize(PQ, mid);

    RatVec u1 = vectorize(PX, collapse_backward(ctx, *p1));
    RatVec u2 = vectorize(PX, collapse_backward(ctx, *p2));
    RatVec umid = vectorize(PX, collapse_backward(ctx, pmid));
    for (size_t j = 0; j < u1.size(); ++j)
      CHECK(umid[j] == (u1[j] + u2[j]) / 2);
  }
}

TEST_CASE("deterministic points map to deterministic points") {
  auto s = load_mermin();
  CollapseContext ctx = make_collapse(s.twisting("beta"), s.subcomplexes.at("V"));
  auto qsecs = sections(ctx.collapsed);
  CHECK_FALSE(qsecs.empty());
  for (const auto& sec : qsecs) {
    TwistedDistribution down = delta_distribution(sec);
    TwistedDistribution up = collapse_backward(ctx, down);
    for (int d = 1; d <= s.space->max_dim(); ++d)
      for (int i = 0; i < s.space->count(d); ++i)
        CHECK(up.at(SimplexId{d, i}).is_point());
    CHECK(collapse_forward(ctx, up) == down);
  }
}

TEST_CASE("forward rejects distributions off the deterministic fiber") {
  std::mt19937_64 rng(17);
  auto s = load_mermin();
  CollapseContext ctx = make_collapse(s.twisting("beta"), s.subcomplexes.at("V"));
  // The uniform distribution is valid over beta but nowhere deterministic.
  CHECK_THROWS_WITH_AS(
      collapse_forward(ctx, s.distributions.at("uniform").dist),
      doctest::Contains("deterministic point"), std::runtime_error);
}

TEST_CASE("vertex counts agree across the collapse bijection") {
  // Vertices of the quotient polytope correspond to vertices of the face of
  // the source polytope pinned on Z.
  auto g = load_glued();
  CollapseContext ctx = make_collapse(g.twisting("g1"), g.subcomplexes.at("shared"));
  PolytopeH PQ = build_hrep(ctx.collapsed);
  auto VQ = enumerate_vertices(PQ);

  // The pinned face of the source polytope: append equality rows forcing the
  // deterministic restriction on Z, then enumerate.
  PolytopeH PX = build_hrep(ctx.twisting);
  const auto& H = ctx.twisting->group();
  Section phi_nu(std::make_shared<TwistingFunction>(TwistingFunction::from_cocycle(
                     pull_back(ctx.twisting->cocycle(), ctx.Zmat.inclusion))),
                 ctx.nu);
  for (int i = 0; i < ctx.Zmat.built.space->count(1); ++i) {
    SimplexId parent = ctx.Zmat.inclusion.image[1][i].base;
    long want = H.tuple_index(phi_nu.phi(EZForm{SimplexId{1, i}}));
    // The edge marginal of each containing maximal simplex must hit `want`
    // with probability one: pin through the reference expressions.
    const auto& F = PX.ref[1][parent.index];
    for (long t = 0; t < static_cast<long>(F.size()); ++t) {
      if (t == want) continue;
      PX.A.push_back(F[t]);
      PX.b.push_back(0);
      PX.row_label.push_back("pin");
    }
  }
  auto VX = enumerate_vertices(PX);
  CHECK(VQ.vertices.size() == VX.vertices.size());
}

TEST_CASE("is_trivializing") {
  auto s = load_mermin();
  auto Um = materialize(s.subcomplexes.at("U"));
  CHECK(is_trivializing(Um.inclusion, s.cochain("beta")));
  auto id = SimplicialMap::identity(s.space);
  CHECK_FALSE(is_trivializing(id, s.cochain("beta")));
  CHECK(is_trivializing(id, s.cochain("zero")));
}
