#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "twistlab/report.hpp"

namespace twistlab {

// Order-preserving map [dom] -> [cod] between finite ordinals.
struct MonotoneMap {
  int dom = 0;
  int cod = 0;
  std::vector<int> values;  // size dom+1, nondecreasing, entries in [0, cod]

  static MonotoneMap identity(int n);
  // delta^i : [n-1] -> [n], skipping i.
  static MonotoneMap coface(int i, int n);
  // sigma^j : [n+1] -> [n], hitting j twice.
  static MonotoneMap codegeneracy(int j, int n);

  bool is_identity() const;
  bool is_injective() const;
  bool is_surjective() const;
  bool operator==(const MonotoneMap& o) const {
    return dom == o.dom && cod == o.cod && values == o.values;
  }
};

// f after g, i.e. (f o g): [g.dom] -> [f.cod].
MonotoneMap compose(const MonotoneMap& f, const MonotoneMap& g);

// Unique factorization u = delta o sigma with sigma surjective, delta injective.
struct EpiMono {
  MonotoneMap delta;  // injective
  MonotoneMap sigma;  // surjective
};
EpiMono epi_mono_factor(const MonotoneMap& u);

struct SimplexId {
  int dim = -1;
  int index = -1;
  bool valid() const { return dim >= 0 && index >= 0; }
  auto operator<=>(const SimplexId&) const = default;
};

// Eilenberg-Zilber normal form: a non-degenerate base together with the
// strictly increasing list of collapsed positions of the surjection applied
// to it. `degens` empty means the simplex itself is non-degenerate.
struct EZForm {
  SimplexId base;
  std::vector<int> degens;

  EZForm() = default;
  explicit EZForm(SimplexId b) : base(b) {}
  EZForm(SimplexId b, std::vector<int> d) : base(b), degens(std::move(d)) {}

  int dim() const { return base.dim + static_cast<int>(degens.size()); }
  bool is_degenerate() const { return !degens.empty(); }
  MonotoneMap surjection() const;
  auto operator<=>(const EZForm&) const = default;
};

// Collapsed-position list of a surjection (positions i with u(i) == u(i+1)).
std::vector<int> collapsed_positions(const MonotoneMap& surj);

// Finite simplicial set presented by its non-degenerate simplices and a face
// table whose entries are EZ normal forms. Immutable after construction.
class SimplicialSet {
 public:
  SimplicialSet(int max_dim, std::vector<std::vector<std::string>> names,
                std::vector<std::vector<std::vector<EZForm>>> faces);

  int max_dim() const { return max_dim_; }
  int count(int dim) const;
  long total_nondegenerate() const;
  long euler_characteristic() const;

  const std::string& name(SimplexId s) const;
  std::optional<SimplexId> find(int dim, const std::string& name) const;
  // Face table entry d_i(s) for a non-degenerate s.
  const EZForm& face(SimplexId s, int i) const;

  // Evaluates the structure map theta^* on an EZ form; theta: [m] -> [e.dim()].
  EZForm apply(const MonotoneMap& theta, const EZForm& e) const;
  EZForm face_of(const EZForm& e, int i) const;
  EZForm degeneracy_of(const EZForm& e, int j) const;

  // All simplices of the given dimension (degenerate ones included), in a
  // deterministic order.
  std::vector<EZForm> all_simplices(int dim) const;

  // Non-degenerate simplices that are not an iterated face of any other
  // non-degenerate simplex; dimension-0 entries are excluded.
  std::vector<SimplexId> maximal_simplices() const;

  std::string describe(const EZForm& e) const;

 private:
  int max_dim_;
  std::vector<std::vector<std::string>> names_;
  std::vector<std::map<std::string, int>> lookup_;
  // faces_[d][idx][i] = d_i of simplex (d, idx), for d >= 1
  std::vector<std::vector<std::vector<EZForm>>> faces_;
};

// Verifies d_i d_j = d_{j-1} d_i (i < j) through EZ normal forms on every
// non-degenerate simplex.
CheckReport check_simplicial(const SimplicialSet& X);

// A simplicial set described by per-dimension key enumerations plus face and
// degeneracy actions on keys. The builder extracts non-degenerate keys and EZ
// normal forms; it is the single construction path for nerves, products,
// quotients and subcomplexes.
struct Presentation {
  using Key = std::vector<long>;
  int max_dim = 0;
  std::function<std::vector<Key>(int dim)> simplices;
  std::function<Key(int dim, const Key&, int i)> face;
  std::function<Key(int dim, const Key&, int j)> degeneracy;
  std::function<std::string(int dim, const Key&)> name;
};

struct BuiltComplex {
  std::shared_ptr<const SimplicialSet> space;
  // per dimension: every key's EZ normal form
  std::vector<std::map<Presentation::Key, EZForm>> key_to_ez;
  // per dimension: the key of each non-degenerate simplex, by index
  std::vector<std::vector<Presentation::Key>> nondeg_keys;

  const Presentation::Key& key_of(SimplexId s) const {
    return nondeg_keys[s.dim][s.index];
  }
  EZForm ez_of(int dim, const Presentation::Key& k) const {
    return key_to_ez[dim].at(k);
  }
};

BuiltComplex build_complex(const Presentation& p);

std::shared_ptr<const SimplicialSet> standard_simplex(int n, int max_dim);

// Simplicial map recorded on non-degenerate simplices of the source.
struct SimplicialMap {
  std::shared_ptr<const SimplicialSet> src;
  std::shared_ptr<const SimplicialSet> dst;
  std::vector<std::vector<EZForm>> image;  // [dim][index]

  EZForm apply(const EZForm& e) const;
  static SimplicialMap identity(std::shared_ptr<const SimplicialSet> X);
};

CheckReport check_simplicial_map(const SimplicialMap& f);

// Composite g o f.
SimplicialMap compose_maps(const SimplicialMap& g, const SimplicialMap& f);

// A face-closed set of non-degenerate simplices of a parent complex.
struct SubComplex {
  std::shared_ptr<const SimplicialSet> parent;
  std::vector<std::vector<char>> member;  // [dim][index]

  bool contains(SimplexId s) const { return member[s.dim][s.index] != 0; }
  bool empty() const;
  static SubComplex closure(std::shared_ptr<const SimplicialSet> X,
                            const std::vector<SimplexId>& generators);
  static SubComplex whole(std::shared_ptr<const SimplicialSet> X);
  bool is_face_closed() const;
};

// Materializes the subcomplex as a complex of its own plus the inclusion.
struct MaterializedSub {
  BuiltComplex built;
  SimplicialMap inclusion;
};
MaterializedSub materialize(const SubComplex& Z);

// Collapse of a nonempty face-closed subcomplex to a basepoint vertex.
struct Quotient {
  BuiltComplex built;
  SimplicialMap projection;   // X -> X/Z
  SimplexId basepoint;        // the collapsed vertex in X/Z
};
Quotient quotient(std::shared_ptr<const SimplicialSet> X, const SubComplex& Z);

}  // namespace twistlab
