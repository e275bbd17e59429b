#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "twistlab/cochain.hpp"

using namespace twistlab;
using namespace twistlab::testing;

TEST_CASE("coboundary on the triangle is the alternating sum") {
  auto d2 = standard_simplex(2, 3);
  FiniteAbelianGroup Z4({4});
  Cochain a(d2, Z4, 1);
  a.set(*d2->find(1, "0,1"), {1});
  a.set(*d2->find(1, "1,2"), {3});
  a.set(*d2->find(1, "0,2"), {2});
  Cochain da = coboundary(a);
  // a12 - a02 + a01 = 3 - 2 + 1 = 2
  CHECK(da.eval(EZForm{*d2->find(2, "0,1,2")}) == GroupElem{2});

  Cochain zero(d2, Z4, 1);
  CHECK(coboundary(zero).is_zero());
}

TEST_CASE("d d = 0") {
  std::mt19937_64 rng(11);
  auto M = load_mermin().space;
  FiniteAbelianGroup Z2({2});
  for (int trial = 0; trial < 20; ++trial) {
    Cochain c0(M, Z2, 0);
    for (int i = 0; i < M->count(0); ++i)
      c0.set(i, Z2.elem_at(static_cast<long>(rng() % 2)));
    CHECK(coboundary(coboundary(c0)).is_zero());
  }
  auto d3 = standard_simplex(3, 3);
  FiniteAbelianGroup Z6({6});
  for (int trial = 0; trial < 20; ++trial)
    CHECK(coboundary(coboundary(random_one_cochain(d3, Z6, rng))).is_zero());
}

TEST_CASE("is_cocycle") {
  auto s = load_mermin();
  CHECK(is_cocycle(s.cochain("beta")));  // 2-dimensional, hence vacuous

  auto d2 = standard_simplex(2, 3);
  FiniteAbelianGroup Z2({2});
  Cochain a(d2, Z2, 1);
  a.set(*d2->find(1, "0,1"), {1});
  CHECK_FALSE(is_cocycle(a));  // da is nonzero on the triangle
}

TEST_CASE("solve_trivialization") {
  auto s = load_mermin();
  auto M = s.space;
  FiniteAbelianGroup Z2({2});

  SUBCASE("zero solves to the lexicographically least cochain, zero") {
    Cochain zero(M, Z2, 2);
    auto a = solve_trivialization(zero);
    REQUIRE(a);
    CHECK(a->is_zero());
  }

  SUBCASE("the Mermin class is infeasible, matching GF(2) brute force") {
    CHECK_FALSE(solve_trivialization(s.cochain("beta")));
    CHECK(gf2_brute_force_count(*M, {1, 0, 1, 0, 1, 0}) == 0);
    // The untwisted system has 2^4 solutions (rank 5 of 6 constraints).
    CHECK(gf2_brute_force_count(*M, {0, 0, 0, 0, 0, 0}) == 16);
    CoboundarySolver solver(Cochain(M, Z2, 2));
    CHECK(solver.solution_count() == 16);
  }

  SUBCASE("constructed coboundaries always solve back") {
    std::mt19937_64 rng(5);
    for (const char* spec : {"Z2", "Z4", "Z2xZ4", "Z3"}) {
      FiniteAbelianGroup H = FiniteAbelianGroup::parse_spec(spec);
      for (int trial = 0; trial < 10; ++trial) {
        Cochain gamma = coboundary(random_one_cochain(M, H, rng));
        auto a = solve_trivialization(gamma);
        REQUIRE(a);
        CHECK(coboundary(*a) == gamma);
      }
    }
  }

  SUBCASE("non-cocycles are rejected") {
    auto d3 = standard_simplex(3, 3);
    Cochain c(d3, Z2, 2);
    c.set(*d3->find(2, "0,1,2"), {1});
    REQUIRE_FALSE(is_cocycle(c));
    CHECK_THROWS(solve_trivialization(c));
  }

  SUBCASE("solution enumeration matches the counted kernel") {
    CoboundarySolver solver(Cochain(M, Z2, 2));
    auto all = solver.all_solutions(1 << 16);
    CHECK(static_cast<long>(all.size()) == solver.solution_count());
    for (const auto& a : all) CHECK(coboundary(a).is_zero());
    CHECK_THROWS_AS(solver.all_solutions(3), CapacityError);
  }

  SUBCASE("mixed torsion Z2xZ4") {
    std::mt19937_64 rng(9);
    FiniteAbelianGroup H = FiniteAbelianGroup::parse_spec("Z2xZ4");
    auto d3 = standard_simplex(3, 3);
    for (int trial = 0; trial < 10; ++trial) {
      Cochain gamma = coboundary(random_one_cochain(d3, H, rng));
      auto a = solve_trivialization(gamma);
      REQUIRE(a);
      CHECK(coboundary(*a) == gamma);
    }
  }
}

TEST_CASE("pull_back") {
  auto s = load_mermin();
  auto M = s.space;

  SUBCASE("along the identity") {
    auto id = SimplicialMap::identity(M);
    CHECK(pull_back(s.cochain("beta"), id) == s.cochain("beta"));
  }

  SUBCASE("beta restricted to the 1-dimensional subcomplex U is zero") {
    auto Zm = materialize(s.subcomplexes.at("U"));
    Cochain r = pull_back(s.cochain("beta"), Zm.inclusion);
    CHECK(r.is_zero());
    CHECK(Zm.built.space->count(2) == 0);
  }

  SUBCASE("pull_back commutes with the coboundary") {
    std::mt19937_64 rng(3);
    FiniteAbelianGroup Z4({4});
    auto Zm = materialize(s.subcomplexes.at("V"));
    for (int trial = 0; trial < 10; ++trial) {
      Cochain a = random_one_cochain(M, Z4, rng);
      CHECK(pull_back(coboundary(a), Zm.inclusion) ==
            coboundary(pull_back(a, Zm.inclusion)));
    }
  }
}
