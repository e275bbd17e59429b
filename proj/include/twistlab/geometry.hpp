#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "twistlab/dist.hpp"

namespace twistlab {

// Inequality description of the twisted-distribution polytope: one coordinate
// per (maximal simplex, outcome tuple), equality rows for normalization and
// the shared-face marginal relations, and nonnegativity on every coordinate.
struct PolytopeH {
  std::shared_ptr<const TwistingFunction> twisting;

  struct Coord {
    SimplexId simplex;
    long outcome;  // tuple index in H^{dim}
  };
  std::vector<SimplexId> maximal;
  std::vector<Coord> coords;
  std::vector<long> block_start;  // per maximal simplex, offset into coords

  RatMat A;  // equality rows
  RatVec b;
  std::vector<std::string> row_label;

  // Reference expression of every simplex's distribution in the maximal-block
  // coordinates: ref[dim][index][outcome] is a row over the columns.
  std::vector<std::vector<std::vector<RatVec>>> ref;

  long column(SimplexId maximal_simplex, long outcome) const;
  int dim() const;  // affine dimension of the solution set of A x = b
};

PolytopeH build_hrep(std::shared_ptr<const TwistingFunction> tw);

// Round trips between distributions and coordinate vectors. devectorize
// reconstructs lower-dimensional values through the reference marginals.
RatVec vectorize(const PolytopeH& P, const TwistedDistribution& p);
TwistedDistribution devectorize(const PolytopeH& P, const RatVec& x);

// Exact phase-I simplex with Bland's rule for {A x = b, x >= 0}.
struct LPResult {
  bool feasible = false;
  RatVec x;
  // When infeasible: y with y^T A <= 0 and y^T b > 0, verified before return.
  RatVec farkas;
};
LPResult lp_feasible(const RatMat& A, const RatVec& b);
// Minimizes c^T x over the same region; the region must be bounded in the
// direction of -c (always true here, coordinates live in [0,1]).
std::optional<RatVec> lp_minimize(const RatMat& A, const RatVec& b, const RatVec& c);

struct VertexEnumeration {
  std::vector<RatVec> vertices;  // sorted lexicographically
  bool complete = true;          // false when the ray cap was hit
  bool empty_polytope = false;
  long dd_rays_peak = 0;
};

// Incremental double description over the homogenization cone.
VertexEnumeration enumerate_vertices(const PolytopeH& P, long ray_cap = 200000,
                                     int jobs = 1);

// Independent oracle: depth-first search over faces (tight coordinate sets)
// with exact feasibility pruning; exact and complete, for cross-checks.
VertexEnumeration brute_force_vertices(const PolytopeH& P, long node_cap = 2000000);

// Certificate that p = Theta(lambda) for a distribution lambda over sections.
struct ClassicalCertificate {
  std::vector<Section> sections;
  RatVec lambda;
};

struct ContextualityVerdict {
  std::optional<ClassicalCertificate> certificate;  // present iff non-contextual
  std::string reason;       // "no sections" | "separating hyperplane" | ""
  RatVec separating;        // Farkas functional over coords + constant term
};

ContextualityVerdict is_noncontextual(const TwistedDistribution& p,
                                      long section_cap = 1 << 16);

// Restriction along a trivializing inclusion followed by the classical test.
// Throws when the pulled-back class is nontrivial.
ContextualityVerdict relative_noncontextual(const TwistedDistribution& p,
                                            const SimplicialMap& f,
                                            long section_cap = 1 << 16);

// A declared scenario symmetry acting on polytope coordinates: a base
// automorphism together with a fiber shift by the spine of a 1-cochain.
struct CoordinateSymmetry {
  std::string name;
  std::vector<long> perm;  // image position of every coordinate
};

// Orbit id per vertex under the group generated by the given symmetries;
// throws if a generator fails to permute the vertex set.
std::vector<int> vertex_orbits(const std::vector<RatVec>& vertices,
                               const std::vector<CoordinateSymmetry>& gens);

// Deterministic sample from the polytope's relative interior-ish region:
// an average of random-objective LP vertices perturbed along the equality
// null space. Returns nullopt when the polytope is empty.
std::optional<TwistedDistribution> sample_distribution(const PolytopeH& P,
                                                       std::mt19937_64& rng);

// Saturation rank of a point: number of independent tight rows among the
// equalities plus tight nonnegativity constraints.
int saturation_rank(const PolytopeH& P, const RatVec& x);

}  // namespace twistlab
