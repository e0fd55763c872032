#ifndef MHG_GRAMMAR_HPP
#define MHG_GRAMMAR_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mhg/hypergraph.hpp"
#include "mhg/rng.hpp"

namespace mhg {

// HRG production rule (A, R). External nodes are ordered and correspond
// position-wise to the lhs label's node labels; non-terminal hyperedges of
// the rhs are ordered (child order of the parse tree).
struct ProductionRule {
  HyperedgeLabel lhs;                      // NonTerminal or Start
  Hypergraph rhs;
  std::vector<NodeId> external;            // |external| == lhs.rank()
  std::vector<HyperedgeId> nonterminals;   // rhs hyperedge ids, ordered

  bool is_start() const { return lhs.kind == HyperedgeLabel::Kind::Start; }
};

// Rule rewritten into canonical form: nodes renumbered (external nodes
// first, in order), hyperedges reordered canonically. `nt_permutation[i]`
// gives the canonical position of the rule's original i-th non-terminal.
struct CanonicalRule {
  ProductionRule rule;
  std::vector<int> nt_permutation;
  std::string key;
};

// Canonical labeling with backtracking over label-refined orbits. Two rules
// get equal keys iff they are isomorphic as labeled rules, respecting the
// lhs label and the external-node order.
CanonicalRule canonicalize(const ProductionRule& rule);

std::string canonical_key(const ProductionRule& rule);

// Canonically relabels a hypergraph: isomorphic hypergraphs map to the
// identical object. Node-id-based conventions downstream (shared-node
// ordering, root tie-breaks) then become isomorphism-invariant.
Hypergraph canonicalize_hypergraph(const Hypergraph& h);

// Rule set with a start symbol; rules deduplicated by canonical key.
class Mhg {
 public:
  // Adds a canonical rule unless an isomorphic one is present. Returns
  // (rule id, true if newly inserted).
  std::pair<int, bool> add_rule(const CanonicalRule& canon);

  int rule_count() const { return static_cast<int>(rules_.size()); }
  const ProductionRule& rule(int id) const { return rules_[id]; }
  const std::string& key_of(int id) const { return keys_[id]; }
  const std::vector<int>& start_rules() const { return start_rules_; }

  // Rules whose lhs equals the label; empty vector if none.
  const std::vector<int>& rules_with_lhs(const HyperedgeLabel& label) const;

  // -1 when no rule has this canonical key.
  int find_by_key(const std::string& key) const;

 private:
  std::vector<ProductionRule> rules_;
  std::vector<std::string> keys_;
  std::vector<int> start_rules_;
  std::map<std::string, int> by_key_;
  std::map<HyperedgeLabel, std::vector<int>> by_lhs_;
};

using ParseSequence = std::vector<int>;

// Replaces the non-terminal occurrence with the rule's rhs, identifying the
// i-th member of the occurrence with the i-th external node. Throws
// OccurrenceNotFound / LabelMismatch.
Hypergraph apply_rule(const Hypergraph& h, HyperedgeId occurrence,
                      const ProductionRule& rule);

// Leftmost-derivation replay. The first rule must be a start rule; each
// subsequent rule's lhs must match the current leftmost non-terminal. The
// result has terminal hyperedges only. Throws InvalidSequence.
Hypergraph derive(const Mhg& mhg, const ParseSequence& seq);

// Uniform choice among applicable rules at each leftmost non-terminal;
// beyond a depth threshold only rules of minimal completion depth are
// sampled, which forces termination. Deterministic for a fixed seed.
ParseSequence sample_derivation(const Mhg& mhg, std::uint64_t seed,
                                int max_expansions);

// Same sampler, rooted at an arbitrary non-terminal (or Start) label and
// driven by an external Rng. Used for subtree resampling.
ParseSequence sample_completion(const Mhg& mhg, const HyperedgeLabel& root,
                                Rng& rng, int max_expansions);

// end[i] = one past the last sequence position of the subtree rooted at
// position i of the parse tree. Throws InvalidSequence for malformed input.
std::vector<int> subtree_spans(const Mhg& mhg, const ParseSequence& seq);

}  // namespace mhg

#endif  // MHG_GRAMMAR_HPP
