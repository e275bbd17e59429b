#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "twistlab/geometry.hpp"
#include "twistlab/quantum.hpp"

namespace twistlab {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
        line(line_no) {}
};

// A scenario file: one simplicial set plus named cochains, Pauli assignments,
// distributions, subcomplexes and symmetry declarations.
struct Scenario {
  std::string name;
  std::string source_path;
  std::string content_hash;

  std::shared_ptr<const SimplicialSet> space;
  // insertion order retained for serialization
  std::vector<std::string> cochain_order;
  std::map<std::string, Cochain> cochains;
  std::vector<std::string> pauli_order;
  std::map<std::string, PauliAssignment> paulis;
  std::vector<std::string> subcomplex_order;
  std::map<std::string, SubComplex> subcomplexes;

  struct NamedDistribution {
    std::string over_cochain;
    TwistedDistribution dist;
  };
  std::vector<std::string> distribution_order;
  std::map<std::string, NamedDistribution> distributions;

  // Symmetry of the polytope of a given cochain: an edge bijection plus an
  // outcome shift, acting through the edge-labeling of each context.
  struct SymmetryDecl {
    std::string name;
    std::string cochain;                    // which polytope it belongs to
    std::string shift;                      // 1-cochain name or empty
    std::map<std::string, std::string> edge_map;  // unlisted edges fixed
  };
  std::vector<SymmetryDecl> symmetries;

  const Cochain& cochain(const std::string& n) const;
  std::shared_ptr<const TwistingFunction> twisting(const std::string& n) const;

 private:
  mutable std::map<std::string, std::shared_ptr<const TwistingFunction>> twist_cache_;
};

Scenario parse_scenario_text(const std::string& text, const std::string& name_hint);
Scenario parse_scenario_file(const std::string& path);

std::string serialize_scenario(const Scenario& s);

// Serialization of one distribution as a file section.
std::string serialize_distribution(const Scenario& s, const std::string& name,
                                   const std::string& over_cochain,
                                   const TwistedDistribution& p);

// Coordinate actions of the declared symmetries attached to a cochain.
// Requires a pure 2-dimensional polytope over an exponent-2 group.
std::vector<CoordinateSymmetry> coordinate_symmetries(const Scenario& s,
                                                      const std::string& cochain,
                                                      const PolytopeH& P);

// The scenario induced by a collapse: the quotient complex together with the
// induced cocycle (named "<cochain>_collapsed").
Scenario quotient_scenario(const Scenario& s, const std::string& subcomplex,
                           const std::string& cochain);

uint64_t fnv1a(const std::string& data);

}  // namespace twistlab
