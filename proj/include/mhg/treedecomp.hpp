#ifndef MHG_TREEDECOMP_HPP
#define MHG_TREEDECOMP_HPP

#include <string>
#include <vector>

#include "mhg/hypergraph.hpp"

namespace mhg {

// Rooted tree decomposition of a hypergraph. Each tree node carries a set of
// hypergraph nodes and a set of hyperedges; both stored sorted.
struct TreeDecomposition {
  struct TdNode {
    std::vector<NodeId> nodes;
    std::vector<HyperedgeId> hyperedges;
    int parent = -1;
    std::vector<int> children;
  };

  std::vector<TdNode> tree;
  int root = -1;

  int size() const { return static_cast<int>(tree.size()); }
  bool contains_node(int t, NodeId v) const;
  // Tree nodes whose node set contains v, in id order.
  std::vector<int> region_of(NodeId v) const;
};

// Two-step molecular tree decomposition: repeatedly split at nodes whose
// removal disconnects the part (inserting a hub tree node holding just the
// cut node), then rip hyperedges off ring parts (a hub holding all the
// part's nodes with one leaf child per hyperedge). The result is repaired
// with make_irredundant and rooted at the tree node holding the hyperedge
// with the lexicographically smallest terminal label (ties by lowest id).
TreeDecomposition decompose(const Hypergraph& h);

// Removes hypergraph nodes from tree nodes until, for every hypergraph node
// v, the tree nodes holding a hyperedge incident to v are exactly the leaves
// of the subtree induced by v's region. Idempotent; only ever shrinks node
// sets. Throws IrreparableDecomposition when no safe removal exists.
TreeDecomposition make_irredundant(const TreeDecomposition& td,
                                   const Hypergraph& h);

// Checks the three tree-decomposition conditions: node cover, one tree node
// per hyperedge (with containment), and connectivity of every node's region.
std::vector<std::string> verify_decomposition(const TreeDecomposition& td,
                                              const Hypergraph& h);

// True iff for every hypergraph node v and every tree node in v's region,
// the tree node holds a hyperedge incident to v exactly when it is a leaf of
// the induced subtree.
bool verify_irredundant(const TreeDecomposition& td, const Hypergraph& h);

}  // namespace mhg

#endif  // MHG_TREEDECOMP_HPP
