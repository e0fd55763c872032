#ifndef MHG_MOLGRAPH_HPP
#define MHG_MOLGRAPH_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mhg {

using NodeId = std::int32_t;
using BondId = std::int32_t;

enum class Element : std::uint8_t { B, C, N, O, F, P, S, Cl, Br, I, H };

const char* element_symbol(Element e);
std::optional<Element> element_from_symbol(const std::string& symbol);

// Base valences per (element, charge). Multivalent entries (S, P) are listed
// ascending; callers resolve to the lowest valence consistent with the bonds
// they have in hand.
class ValenceTable {
 public:
  // All admissible base valences, ascending. Empty span if the combination is
  // not supported.
  static std::span<const int> valences(Element element, int charge);

  // Lowest admissible valence >= min_total, or nullopt.
  static std::optional<int> resolve_at_least(Element element, int charge,
                                             int min_total);

  // True iff total is exactly one of the admissible valences.
  static bool admits_exact(Element element, int charge, int total);
};

enum class Chirality : std::uint8_t { None, CCW, CW };
enum class EzConfig : std::uint8_t { None, E, Z };

// Atom label: element, formal charge, folded-in hydrogens, an opaque
// tetrahedral chirality tag, and the resolved base valence. The valence is
// part of the label so that the required heavy degree is a function of the
// label alone (S and P admit several valences; a sulfide S and a sulfone S
// are distinct labels).
struct AtomLabel {
  Element element = Element::C;
  int charge = 0;
  int implicit_h = 0;
  int valence = 4;
  Chirality chirality = Chirality::None;

  auto operator<=>(const AtomLabel&) const = default;
};

// Makes an AtomLabel with the valence resolved as the lowest admissible one
// >= implicit_h. Throws UnknownElement / ValenceError.
AtomLabel make_atom_label(Element element, int charge, int implicit_h,
                          Chirality chirality = Chirality::None);

// Heavy-bond order sum this label requires: valence - implicit_h.
int heavy_degree_target(const AtomLabel& label);

std::string atom_label_to_string(const AtomLabel& label);

struct BondLabel {
  int order = 1;  // 1, 2, or 3
  EzConfig ez = EzConfig::None;

  auto operator<=>(const BondLabel&) const = default;
};

std::string bond_label_to_string(const BondLabel& label);

struct Bond {
  NodeId u = -1;
  NodeId v = -1;
  BondLabel label;
};

// Undirected labeled multigraph-free graph of atoms and bonds. No self-loops
// and no parallel bonds; a double bond is a single edge of order 2.
class MolecularGraph {
 public:
  NodeId add_atom(const AtomLabel& label);
  // Throws Error on self-loop or parallel bond.
  BondId add_bond(NodeId u, NodeId v, const BondLabel& label);

  int atom_count() const { return static_cast<int>(atoms_.size()); }
  int bond_count() const { return static_cast<int>(bonds_.size()); }
  const AtomLabel& atom(NodeId id) const { return atoms_[id]; }
  AtomLabel& atom(NodeId id) { return atoms_[id]; }
  const Bond& bond(BondId id) const { return bonds_[id]; }
  Bond& bond(BondId id) { return bonds_[id]; }
  const std::vector<AtomLabel>& atoms() const { return atoms_; }
  const std::vector<Bond>& bonds() const { return bonds_; }

  // Incident (neighbor atom, bond id) pairs in insertion order.
  struct Incidence {
    NodeId neighbor;
    BondId bond;
  };
  const std::vector<Incidence>& incident(NodeId id) const {
    return adjacency_[id];
  }

  // Sum of incident bond orders.
  int weighted_degree(NodeId id) const;

  std::optional<BondId> find_bond(NodeId u, NodeId v) const;

 private:
  std::vector<AtomLabel> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Incidence>> adjacency_;
};

struct DegreeViolation {
  NodeId atom = -1;
  int expected = 0;
  int actual = 0;
  std::string message;
};

// Empty iff every atom's weighted heavy degree equals its label's target.
std::vector<DegreeViolation> check_molecular_graph(const MolecularGraph& g);

// Label-preserving graph isomorphism (atom labels, bond labels).
bool isomorphic(const MolecularGraph& g1, const MolecularGraph& g2);

// Cycle lengths of a minimum cycle basis, ascending. Empty for acyclic graphs.
std::vector<int> ring_sizes(const MolecularGraph& g);

}  // namespace mhg

#endif  // MHG_MOLGRAPH_HPP
