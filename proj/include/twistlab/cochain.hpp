#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "twistlab/group.hpp"
#include "twistlab/simplicial.hpp"

namespace twistlab {

// Group-valued cochain on the non-degenerate k-simplices of a complex.
// Degenerate simplices always evaluate to zero, so cochains are normalized by
// construction.
class Cochain {
 public:
  Cochain() = default;
  Cochain(std::shared_ptr<const SimplicialSet> space, FiniteAbelianGroup group,
          int degree);

  const std::shared_ptr<const SimplicialSet>& space() const { return space_; }
  const FiniteAbelianGroup& group() const { return group_; }
  int degree() const { return degree_; }

  const GroupElem& value(int index) const { return values_[index]; }
  void set(int index, GroupElem v) { values_[index] = std::move(v); }
  void set(SimplexId s, GroupElem v);

  GroupElem eval(const EZForm& e) const;
  bool is_zero() const;
  bool operator==(const Cochain& o) const;

  Cochain operator+(const Cochain& o) const;
  Cochain operator-(const Cochain& o) const;
  Cochain operator-() const;

 private:
  std::shared_ptr<const SimplicialSet> space_;
  FiniteAbelianGroup group_;
  int degree_ = 0;
  std::vector<GroupElem> values_;
};

// (dc)(x) = sum_i (-1)^i c(d_i x), zero when the next dimension is empty or
// beyond the complex's cap.
Cochain coboundary(const Cochain& c);

bool is_cocycle(const Cochain& c);

// (f^* c)(y) = c(f(y)), read as zero on degenerate images.
Cochain pull_back(const Cochain& c, const SimplicialMap& f);

// Solutions of d(alpha) = target in one degree lower. The solver runs one
// integer incidence matrix through Smith normal form and treats each
// invariant factor of the coefficient group independently.
class CoboundarySolver {
 public:
  explicit CoboundarySolver(const Cochain& target);

  bool solvable() const { return solvable_; }
  // Lexicographically least solution (simplex-major, residue-minor order).
  const Cochain& least_solution() const;
  long solution_count() const;  // |kernel| when solvable
  // All solutions in deterministic order; throws CapacityError beyond cap.
  std::vector<Cochain> all_solutions(long cap) const;

  struct KernelGenerator {
    std::vector<long> vec;
    long order;
  };

 private:
  Cochain target_;
  bool solvable_ = false;
  Cochain least_;
  std::vector<std::vector<long>> particular_cache_;       // per component
  std::vector<std::vector<KernelGenerator>> kernel_cache_;  // per component
};

std::optional<Cochain> solve_trivialization(const Cochain& gamma);

struct CapacityError : std::runtime_error {
  long have;
  explicit CapacityError(const std::string& what, long n)
      : std::runtime_error(what), have(n) {}
};

}  // namespace twistlab
