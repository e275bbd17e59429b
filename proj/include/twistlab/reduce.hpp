#pragma once

#include <memory>

#include "twistlab/dist.hpp"
#include "twistlab/geometry.hpp"

namespace twistlab {

// Data of one twist-and-collapse reduction: a subcomplex Z of X with
// [gamma|_Z] = 0, a chosen trivializing 1-cochain nu on Z, its zero extension
// to X, the quotient X/Z and the induced cocycle on it.
struct CollapseContext {
  std::shared_ptr<const SimplicialSet> X;
  SubComplex Z;
  MaterializedSub Zmat;
  std::shared_ptr<const TwistingFunction> twisting;  // gamma on X

  Cochain nu;        // on Z with d(nu) = gamma|_Z, lexicographically least
  Cochain nu_tilde;  // nu extended by zero to X
  Quotient quot;     // X -> X/Z

  std::shared_ptr<const TwistingFunction> shifted;    // gamma - d(nu~) on X
  std::shared_ptr<const TwistingFunction> collapsed;  // induced cocycle on X/Z
};

// Requires Z nonempty, face-closed, and the restricted class trivial.
CollapseContext make_collapse(std::shared_ptr<const TwistingFunction> tw,
                              const SubComplex& Z);

// Forward direction: distributions restricting to the deterministic point of
// nu on Z map to distributions on the quotient. Throws when the restriction
// condition fails, naming the offending simplex.
TwistedDistribution collapse_forward(const CollapseContext& ctx,
                                     const TwistedDistribution& p);

// Inverse direction; total on the quotient polytope.
TwistedDistribution collapse_backward(const CollapseContext& ctx,
                                      const TwistedDistribution& pbar);

// True iff the pullback of the cocycle along f is a coboundary.
bool is_trivializing(const SimplicialMap& f, const Cochain& gamma);

}  // namespace twistlab
