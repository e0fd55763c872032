#ifndef MHG_HYPERGRAPH_HPP
#define MHG_HYPERGRAPH_HPP

#include <compare>
#include <string>
#include <vector>

#include "mhg/molgraph.hpp"

namespace mhg {

using HyperedgeId = std::int32_t;

// Hyperedge label: a terminal atom, a structural non-terminal identified by
// the ordered labels of its member nodes, or the start symbol.
struct HyperedgeLabel {
  enum class Kind : std::uint8_t { Terminal, NonTerminal, Start };

  Kind kind = Kind::Terminal;
  AtomLabel atom;                        // Terminal only
  std::vector<BondLabel> node_labels;    // NonTerminal only

  static HyperedgeLabel terminal(const AtomLabel& a) {
    HyperedgeLabel l;
    l.kind = Kind::Terminal;
    l.atom = a;
    return l;
  }
  static HyperedgeLabel nonterminal(std::vector<BondLabel> labels) {
    HyperedgeLabel l;
    l.kind = Kind::NonTerminal;
    l.node_labels = std::move(labels);
    return l;
  }
  static HyperedgeLabel start() {
    HyperedgeLabel l;
    l.kind = Kind::Start;
    return l;
  }

  int rank() const { return static_cast<int>(node_labels.size()); }

  auto operator<=>(const HyperedgeLabel&) const = default;
};

std::string hyperedge_label_to_string(const HyperedgeLabel& label);

struct Hyperedge {
  HyperedgeLabel label;
  std::vector<NodeId> members;  // ordered, no duplicates
};

// Nodes carry bond labels; hyperedges carry atom/non-terminal labels.
class Hypergraph {
 public:
  NodeId add_node(const BondLabel& label);
  HyperedgeId add_hyperedge(const HyperedgeLabel& label,
                            std::vector<NodeId> members);

  int node_count() const { return static_cast<int>(node_labels_.size()); }
  int hyperedge_count() const { return static_cast<int>(hyperedges_.size()); }
  const BondLabel& node_label(NodeId id) const { return node_labels_[id]; }
  const Hyperedge& hyperedge(HyperedgeId id) const { return hyperedges_[id]; }
  const std::vector<BondLabel>& node_labels() const { return node_labels_; }
  const std::vector<Hyperedge>& hyperedges() const { return hyperedges_; }

  // Hyperedges containing the node, in insertion order.
  std::vector<HyperedgeId> incident_hyperedges(NodeId id) const;

  // Number of hyperedges containing the node (duplicate membership counted).
  int degree(NodeId id) const;

 private:
  std::vector<BondLabel> node_labels_;
  std::vector<Hyperedge> hyperedges_;
};

struct HypergraphViolation {
  std::string message;
};

// Empty iff all labels are Terminal, every node has degree exactly 2, member
// lists are well-formed, and each hyperedge's order-weighted size matches its
// atom's heavy-degree target.
std::vector<HypergraphViolation> check_molecular_hypergraph(
    const Hypergraph& h);

// Bonds become nodes, atoms become hyperedges. Throws EmptyBondSet for
// graphs without bonds; requires g to pass check_molecular_graph.
Hypergraph enc_h(const MolecularGraph& g);

// Inverse of enc_h: each degree-2 node becomes a bond between the two
// incident hyperedges' atoms. Throws NotTwoRegular / CardinalityMismatch for
// hypergraphs failing check_molecular_hypergraph.
MolecularGraph dec_h(const Hypergraph& h);

}  // namespace mhg

#endif  // MHG_HYPERGRAPH_HPP
