#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "twistlab/cochain.hpp"
#include "twistlab/group.hpp"
#include "twistlab/simplicial.hpp"

namespace twistlab {

// Twisting function generated by a normalized 2-cocycle, with values cached on
// non-degenerate simplices. eta_1 is trivial, eta_2 is the cocycle itself and
// higher degrees follow the recursion
//   eta_n(x) = (gamma(d_3...d_n x), eta_{n-1}(d_1 x) - eta_{n-1}(d_0 x)).
class TwistingFunction {
 public:
  static TwistingFunction from_cocycle(const Cochain& gamma);

  const std::shared_ptr<const SimplicialSet>& base() const;
  const FiniteAbelianGroup& group() const { return gamma_.group(); }
  const Cochain& cocycle() const { return gamma_; }

  // eta_n on any simplex presented as an EZ form; degenerate simplices follow
  // eta(s_0 x) = 0 and eta(s_j x) = s_{j-1} eta(x).
  NerveTuple eta(const EZForm& e) const;

  // Twisting identities on every simplex of the base, including the
  // degeneracy clauses re-derived through the recursion.
  CheckReport verify() const;

  bool same_shape(const TwistingFunction& o) const;

 private:
  explicit TwistingFunction(Cochain gamma) : gamma_(std::move(gamma)) {}
  NerveTuple eta_recursive(const EZForm& e) const;

  Cochain gamma_;
  std::vector<std::vector<NerveTuple>> cache_;  // [dim][index], dims >= 1
};

TwistingFunction tensor(const TwistingFunction& a, const TwistingFunction& b);
TwistingFunction inverse(const TwistingFunction& a);

// The total space NH x_eta X materialized as a simplicial set. Keys combine
// an outcome tuple with an EZ form of the base.
struct TwistedBundle {
  std::shared_ptr<const TwistingFunction> twisting;
  BuiltComplex total;

  Presentation::Key key(const NerveTuple& g, const EZForm& x) const;
  NerveTuple tuple_of(int dim, const Presentation::Key& k) const;
  EZForm base_of(int dim, const Presentation::Key& k) const;
};

TwistedBundle twisted_product(const TwistingFunction& eta);

// The face map of the twisted product in fiber coordinates: component i of
// d_i(g, x) lying over d_i(x); only i = 0 picks up the twist.
NerveTuple bundle_face_tuple(const TwistingFunction& eta, const NerveTuple& g,
                             const EZForm& x, int i);

// Section of a trivializable twisting, recorded as the trivializing 1-cochain.
// Degree-n components are reconstructed from edge data via the spine formula.
class Section {
 public:
  Section(std::shared_ptr<const TwistingFunction> tw, Cochain alpha);

  const Cochain& alpha() const { return alpha_; }
  const std::shared_ptr<const TwistingFunction>& twisting() const { return tw_; }

  NerveTuple phi(const EZForm& e) const;

  // All section relations (face and degeneracy clauses) on the whole base.
  CheckReport verify() const;

  bool operator==(const Section& o) const { return alpha_ == o.alpha_; }

 private:
  std::shared_ptr<const TwistingFunction> tw_;
  Cochain alpha_;
};

// Pointwise sum, a section of the tensor twisting.
Section section_sum(const TwistingFunction& target, const Section& a,
                    const Section& b);

// All sections of pi_eta for the twisting generated by gamma; empty iff the
// class of gamma is nontrivial. Throws CapacityError past the cap.
std::vector<Section> sections(std::shared_ptr<const TwistingFunction> tw,
                              long cap = 1 << 16);

// Bundle isomorphism data between two twistings over the same base: a
// 1-cochain alpha with d(alpha) = gamma_eta - gamma_tau, together with the
// induced fiberwise maps psi_n.
struct TwistingEquivalence {
  Cochain alpha;
  NerveTuple psi(const EZForm& e) const;
  const TwistingFunction* from = nullptr;
  const TwistingFunction* to = nullptr;
};
std::optional<TwistingEquivalence> twistings_equivalent(const TwistingFunction& eta,
                                                        const TwistingFunction& tau);
CheckReport verify_equivalence(const TwistingEquivalence& eq);

// W(NH) and W-bar(NH) up to the base's dimension, the classifying maps
// theta and theta-bar, and the pullback-square verification.
struct ClassifyingMapReport {
  CheckReport w_simplicial;
  CheckReport wbar_simplicial;
  CheckReport theta_simplicial;
  CheckReport theta_bar_simplicial;
  CheckReport pullback_fibers;
  bool ok() const {
    return w_simplicial.ok && wbar_simplicial.ok && theta_simplicial.ok &&
           theta_bar_simplicial.ok && pullback_fibers.ok;
  }
};
ClassifyingMapReport classifying_map_check(const TwistingFunction& eta);

// W-bar K for K = NH, exposed for tests.
BuiltComplex w_bar(const FiniteAbelianGroup& H, int max_dim);
BuiltComplex w_total(const FiniteAbelianGroup& H, int max_dim);

}  // namespace twistlab
