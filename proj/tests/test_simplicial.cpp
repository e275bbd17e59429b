#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "helpers.hpp"
#include "twistlab/group.hpp"
#include "twistlab/simplicial.hpp"

using namespace twistlab;
using twistlab::testing::load_mermin;

namespace {

// Independent oracle for face counts of the standard simplex: the number of
// strictly increasing (k+1)-tuples in [0, n].
long count_monotone_injections(int k, int n) {
  std::function<long(int, int)> rec = [&](int pos, int lo) -> long {
    if (pos == k + 1) return 1;
    long total = 0;
    for (int v = lo; v <= n; ++v) total += rec(pos + 1, v + 1);
    return total;
  };
  return rec(0, 0);
}

}  // namespace

TEST_CASE("standard simplices have the right face counts") {
  auto d0 = standard_simplex(0, 3);
  CHECK(d0->count(0) == 1);
  CHECK(d0->count(1) == 0);

  auto d2 = standard_simplex(2, 3);
  CHECK(d2->count(0) == 3);
  CHECK(d2->count(1) == 3);
  CHECK(d2->count(2) == 1);

  auto d3 = standard_simplex(3, 3);
  for (int k = 0; k <= 3; ++k) CHECK(d3->count(k) == count_monotone_injections(k, 3));
  CHECK(check_simplicial(*d3).ok);

  CHECK_THROWS(standard_simplex(4, 3));
}

TEST_CASE("face evaluation through EZ normal forms") {
  auto d2 = standard_simplex(2, 3);
  SimplexId top = *d2->find(2, "0,1,2");

  SUBCASE("d0 of the top simplex is the {1,2} edge") {
    // Oracle: compose the coface [1]->[2] selecting positions {1,2} with the
    // top simplex's vertex map.
    CHECK(d2->face(top, 0) == EZForm{*d2->find(1, "1,2")});
    CHECK(d2->face(top, 1) == EZForm{*d2->find(1, "0,2")});
    CHECK(d2->face(top, 2) == EZForm{*d2->find(1, "0,1")});
  }

  SUBCASE("d_i s_i = id and d0 s1 = s0 d0 on an edge") {
    EZForm e{*d2->find(1, "1,2")};
    for (int i = 0; i <= 1; ++i)
      CHECK(d2->face_of(d2->degeneracy_of(e, i), i) == e);
    CHECK(d2->face_of(d2->degeneracy_of(e, 1), 0) ==
          d2->degeneracy_of(d2->face_of(e, 0), 0));
  }

  SUBCASE("EZ uniqueness: every simplex reproduces from its normal form") {
    for (int d = 0; d <= 3; ++d)
      for (const EZForm& e : d2->all_simplices(d)) {
        // Rebuild by applying the degeneracy word to the base.
        EZForm built{e.base};
        for (int j : e.degens) built = d2->degeneracy_of(built, j);
        CHECK(built == e);
      }
  }
}

TEST_CASE("simplicial identity sweeps") {
  CHECK(check_simplicial(*standard_simplex(3, 3)).ok);
  CHECK(check_simplicial(*load_mermin().space).ok);
  for (const char* spec : {"Z2", "Z4", "Z2xZ2", "Z3"}) {
    auto N = nerve(FiniteAbelianGroup::parse_spec(spec), 3);
    CHECK(check_simplicial(*N.space).ok);
  }
}

TEST_CASE("a corrupted face table is reported with the violated identity") {
  auto M = load_mermin().space;
  std::vector<std::vector<std::string>> names(4);
  std::vector<std::vector<std::vector<EZForm>>> faces(4);
  for (int d = 0; d <= 2; ++d)
    for (int i = 0; i < M->count(d); ++i) {
      names[d].push_back(M->name(SimplexId{d, i}));
      if (d >= 1) {
        std::vector<EZForm> row;
        for (int k = 0; k <= d; ++k) row.push_back(M->face(SimplexId{d, i}, k));
        faces[d].push_back(row);
      }
    }
  faces[2][0][0] = faces[2][1][0];  // break d0 of the first triangle
  SimplicialSet broken(3, names, faces);
  CheckReport rep = check_simplicial(broken);
  CHECK_FALSE(rep.ok);
  CHECK(rep.first_violation.find("d0") != std::string::npos);
}

TEST_CASE("nerve structure maps") {
  FiniteAbelianGroup Z2({2});
  auto N = nerve(Z2, 3);

  SUBCASE("d1 multiplies adjacent entries") {
    // (1,1) is the unique non-degenerate 2-simplex; d1(1,1) = (0) degenerate.
    SimplexId two = *N.space->find(2, "(1,1)");
    CHECK(N.space->face(two, 1).is_degenerate());
    CHECK(N.space->face(two, 0) == EZForm{*N.space->find(1, "(1)")});
    CHECK(N.space->face(two, 2) == EZForm{*N.space->find(1, "(1)")});
  }

  SUBCASE("non-degenerate simplices are tuples avoiding the identity") {
    // Oracle: enumerate tuples and discard those hit by a degeneracy map.
    FiniteAbelianGroup Z4({4});
    auto N4 = nerve(Z4, 3);
    long expect2 = 0;
    for (long idx = 0; idx < Z4.tuple_count(2); ++idx) {
      NerveTuple t = Z4.tuple_at(2, idx);
      bool degenerate = false;
      for (long src = 0; src < Z4.tuple_count(1); ++src)
        for (int j = 0; j <= 1; ++j)
          if (Z4.nerve_degeneracy(Z4.tuple_at(1, src), j) == t) degenerate = true;
      if (!degenerate) ++expect2;
    }
    CHECK(N4.space->count(2) == expect2);
    CHECK(N.space->count(2) == 1);  // only (1,1) over Z2
  }

  SUBCASE("the trivial group nerve is the point") {
    auto P = nerve(FiniteAbelianGroup({}), 3);
    for (int d = 0; d <= 3; ++d) CHECK(P.space->count(d) == (d == 0 ? 1 : 0));
  }
}

TEST_CASE("quotients") {
  auto d2 = standard_simplex(2, 3);

  SUBCASE("collapsing everything gives the point") {
    auto q = quotient(d2, SubComplex::whole(d2));
    for (int d = 0; d <= 3; ++d) CHECK(q.built.space->count(d) == (d == 0 ? 1 : 0));
  }

  SUBCASE("the empty subcomplex is rejected") {
    SubComplex empty = SubComplex::closure(d2, {});
    CHECK_THROWS_WITH_AS(quotient(d2, empty),
                         doctest::Contains("empty"), std::runtime_error);
  }

  SUBCASE("collapsing one boundary edge of the triangle") {
    auto Z = SubComplex::closure(d2, {*d2->find(1, "0,1")});
    auto q = quotient(d2, Z);
    CHECK(q.built.space->count(0) == 2);
    CHECK(q.built.space->count(1) == 2);
    CHECK(q.built.space->count(2) == 1);
    CHECK(check_simplicial(*q.built.space).ok);
    CHECK(check_simplicial_map(q.projection).ok);
  }

  SUBCASE("Euler characteristic is additive") {
    auto M = load_mermin().space;
    for (const char* gen : {"u", "eta", "sigma"}) {
      SimplexId g;
      bool found = false;
      for (int d = 0; d <= M->max_dim() && !found; ++d)
        if (auto id = M->find(d, gen)) {
          g = *id;
          found = true;
        }
      REQUIRE(found);
      auto Z = SubComplex::closure(M, {g});
      auto Zm = materialize(Z);
      auto q = quotient(M, Z);
      CHECK(M->euler_characteristic() ==
            Zm.built.space->euler_characteristic() +
                q.built.space->euler_characteristic() - 1);
    }
  }

  SUBCASE("non-face-closed subsets are rejected") {
    SubComplex bad = SubComplex::closure(d2, {});
    bad.member[2][0] = 1;  // triangle without its edges
    CHECK_FALSE(bad.is_face_closed());
    CHECK_THROWS(quotient(d2, bad));
  }
}

TEST_CASE("maximal simplices") {
  auto M = load_mermin().space;
  auto maximal = M->maximal_simplices();
  CHECK(maximal.size() == 6);
  for (SimplexId m : maximal) CHECK(m.dim == 2);

  // A dangling edge stays maximal.
  auto glued = twistlab::testing::load_glued().space;
  CHECK(glued->maximal_simplices().size() == 2);
}

TEST_CASE("simplicial maps compose and verify") {
  auto M = load_mermin().space;
  auto id = SimplicialMap::identity(M);
  CHECK(check_simplicial_map(id).ok);
  auto Z = SubComplex::closure(M, {*M->find(2, "eta"), *M->find(2, "xi")});
  auto Zm = materialize(Z);
  CHECK(check_simplicial_map(Zm.inclusion).ok);
  auto q = quotient(M, Z);
  CHECK(check_simplicial_map(q.projection).ok);
  auto comp = compose_maps(q.projection, Zm.inclusion);
  CHECK(check_simplicial_map(comp).ok);
  // Everything in Z lands on degeneracies of the basepoint.
  for (int d = 0; d <= M->max_dim(); ++d)
    for (size_t i = 0; i < comp.image[d].size(); ++i)
      CHECK(comp.image[d][i].base == q.basepoint);
}
