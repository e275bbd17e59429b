#pragma once

#include <random>
#include <string>

#include "twistlab/scenario.hpp"

namespace twistlab::testing {

inline std::string data_path(const std::string& name) {
  return std::string(TWISTLAB_DATA_DIR) + "/" + name;
}

inline Scenario load_mermin() { return parse_scenario_file(data_path("mermin.scn")); }
inline Scenario load_glued() { return parse_scenario_file(data_path("glued.scn")); }

// All edge assignments alpha: X_1 -> Z2 with the triangle sums matching the
// target; independent of the cochain solver.
inline long gf2_brute_force_count(const SimplicialSet& X,
                                  const std::vector<int>& target) {
  int ne = X.count(1), nt = X.count(2);
  long hits = 0;
  for (long mask = 0; mask < (1L << ne); ++mask) {
    bool ok = true;
    for (int t = 0; t < nt && ok; ++t) {
      int sum = 0;
      for (int i = 0; i <= 2; ++i) {
        const EZForm& f = X.face(SimplexId{2, t}, i);
        if (!f.is_degenerate()) sum ^= (mask >> f.base.index) & 1;
      }
      if (sum != target[t]) ok = false;
    }
    if (ok) ++hits;
  }
  return hits;
}

inline Cochain random_one_cochain(std::shared_ptr<const SimplicialSet> X,
                                  const FiniteAbelianGroup& H,
                                  std::mt19937_64& rng) {
  Cochain a(X, H, 1);
  for (int i = 0; i < X->count(1); ++i)
    a.set(i, H.elem_at(static_cast<long>(rng() % H.order())));
  return a;
}

inline Cochain random_two_cochain(std::shared_ptr<const SimplicialSet> X,
                                  const FiniteAbelianGroup& H,
                                  std::mt19937_64& rng) {
  Cochain c(X, H, 2);
  for (int i = 0; i < X->count(2); ++i)
    c.set(i, H.elem_at(static_cast<long>(rng() % H.order())));
  return c;
}

// A random cocycle: a coboundary, which on 2-dimensional complexes is also
// composed with a random plain 2-cochain (vacuously closed there).
inline Cochain random_cocycle(std::shared_ptr<const SimplicialSet> X,
                              const FiniteAbelianGroup& H, std::mt19937_64& rng) {
  Cochain c = coboundary(random_one_cochain(X, H, rng));
  if (X->count(3) == 0)
    for (int i = 0; i < X->count(2); ++i)
      c.set(i, H.add(c.value(i), H.elem_at(static_cast<long>(rng() % H.order()))));
  return c;
}

}  // namespace twistlab::testing
