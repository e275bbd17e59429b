#pragma once

#include <string>
#include <vector>

#include "twistlab/simplicial.hpp"

namespace twistlab {

// One group element, as residues against the invariant factors.
using GroupElem = std::vector<int>;
// An element of H^n, i.e. an n-simplex of the nerve NH.
using NerveTuple = std::vector<GroupElem>;

// Finite abelian group in invariant-factor form d1 | d2 | ... (empty list is
// the trivial group).
class FiniteAbelianGroup {
 public:
  FiniteAbelianGroup() = default;
  explicit FiniteAbelianGroup(std::vector<int> moduli);

  // "Z2", "Z4", "Z2xZ4", "Z1" (trivial), ...
  static FiniteAbelianGroup parse_spec(const std::string& spec);
  std::string spec() const;

  const std::vector<int>& moduli() const { return moduli_; }
  int rank() const { return static_cast<int>(moduli_.size()); }
  long order() const;
  bool trivial() const { return moduli_.empty(); }

  GroupElem zero() const { return GroupElem(moduli_.size(), 0); }
  bool is_zero(const GroupElem& a) const;
  GroupElem add(const GroupElem& a, const GroupElem& b) const;
  GroupElem sub(const GroupElem& a, const GroupElem& b) const;
  GroupElem neg(const GroupElem& a) const;
  GroupElem reduce(const std::vector<long>& raw) const;

  long elem_index(const GroupElem& a) const;
  GroupElem elem_at(long idx) const;

  // Residues joined by '.', e.g. "1.3" in Z2xZ4; plain "3" for cyclic groups.
  std::string elem_str(const GroupElem& a) const;
  GroupElem parse_elem(const std::string& s) const;

  bool operator==(const FiniteAbelianGroup& o) const { return moduli_ == o.moduli_; }

  // Tuple (H^n) helpers.
  long tuple_count(int n) const;
  long tuple_index(const NerveTuple& t) const;
  NerveTuple tuple_at(int n, long idx) const;
  NerveTuple tuple_zero(int n) const;
  NerveTuple tuple_add(const NerveTuple& a, const NerveTuple& b) const;
  NerveTuple tuple_sub(const NerveTuple& a, const NerveTuple& b) const;
  NerveTuple tuple_neg(const NerveTuple& a) const;
  std::string tuple_str(const NerveTuple& t) const;
  NerveTuple parse_tuple(const std::string& s, int n) const;

  // Nerve structure maps on tuples.
  NerveTuple nerve_face(const NerveTuple& t, int i) const;
  NerveTuple nerve_degeneracy(const NerveTuple& t, int j) const;

 private:
  std::vector<int> moduli_;
};

// The nerve NH truncated at max_dim, built through the generic presentation
// machinery; keys are flattened residue tuples.
BuiltComplex nerve(const FiniteAbelianGroup& H, int max_dim);

NerveTuple nerve_key_to_tuple(const FiniteAbelianGroup& H, int dim,
                              const Presentation::Key& key);
Presentation::Key nerve_tuple_to_key(const NerveTuple& t);

}  // namespace twistlab
