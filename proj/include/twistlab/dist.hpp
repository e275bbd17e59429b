#pragma once

#include <memory>
#include <vector>

#include "twistlab/bundle.hpp"
#include "twistlab/rational.hpp"

namespace twistlab {

// Exact-rational weights over the outcome tuples H^n of one simplex.
struct DistributionVector {
  RatVec w;

  static DistributionVector zero(long size) {
    DistributionVector v;
    v.w.assign(size, Rational(0));
    return v;
  }
  static DistributionVector point(long size, long at) {
    DistributionVector v = zero(size);
    v.w[at] = 1;
    return v;
  }
  Rational sum() const;
  bool is_point() const;
  long point_index() const;  // -1 when not a point mass
  bool operator==(const DistributionVector& o) const { return w == o.w; }
};

// Family of outcome distributions over the non-degenerate simplices of the
// base, compatible with the twisted face maps. Values on degenerate simplices
// are never stored; they are pushforwards along the degeneracy word.
class TwistedDistribution {
 public:
  explicit TwistedDistribution(std::shared_ptr<const TwistingFunction> tw);

  const std::shared_ptr<const TwistingFunction>& twisting() const { return tw_; }
  const std::shared_ptr<const SimplicialSet>& base() const { return tw_->base(); }
  const FiniteAbelianGroup& group() const { return tw_->group(); }

  DistributionVector& at(SimplexId s) { return table_[s.dim][s.index]; }
  const DistributionVector& at(SimplexId s) const { return table_[s.dim][s.index]; }

  // Value over an arbitrary simplex given as an EZ form.
  DistributionVector expand(const EZForm& e) const;

  bool operator==(const TwistedDistribution& o) const;

 private:
  std::shared_ptr<const TwistingFunction> tw_;
  std::vector<std::vector<DistributionVector>> table_;
};

// Pushforward of a fiber distribution along one bundle face map.
DistributionVector marginal(const TwistingFunction& tw, const DistributionVector& v,
                            const EZForm& x, int i);

// Exhaustive check of the marginal equations, normalization and
// nonnegativity; reports the first offending simplex/face.
CheckReport validate(const TwistedDistribution& p);

TwistedDistribution delta_distribution(const Section& s);

// Theta: a distribution over sections pushed to a twisted distribution.
TwistedDistribution classical_embed(std::shared_ptr<const TwistingFunction> tw,
                                    const std::vector<Section>& secs,
                                    const RatVec& lambda);

// Fiberwise convolution, living over the tensor twisting.
TwistedDistribution convolve(const TwistedDistribution& p,
                             const TwistedDistribution& q);

// Pullback along f into the base; the result lives over f^*(gamma).
TwistedDistribution restrict_along(const TwistedDistribution& p,
                                   const SimplicialMap& f);

// K-equivariant distribution on the inverse twisted product with values in K.
struct EquivariantDistribution {
  TwistedBundle carrier;  // NH x_{eta^{-1}} X
  std::vector<std::vector<DistributionVector>> q;  // per carrier simplex

  DistributionVector expand(const EZForm& e) const;
};

EquivariantDistribution to_equivariant(const TwistedDistribution& p);
CheckReport validate_equivariant(const EquivariantDistribution& q);
// Throws when the input fails equivariance or simpliciality.
TwistedDistribution from_equivariant(const EquivariantDistribution& q);

}  // namespace twistlab
