#ifndef MHG_INFERENCE_HPP
#define MHG_INFERENCE_HPP

#include <vector>

#include "mhg/grammar.hpp"
#include "mhg/treedecomp.hpp"

namespace mhg {

// Production rule for one tree node: lhs from the nodes shared with the
// parent (Start at the root), rhs from the tree node's own hypergraph, one
// non-terminal per child over the nodes shared with that child. Shared node
// sets are ordered by ascending hypergraph node id on both sides, which is
// what makes extracted rules glue back together.
ProductionRule extract_rule(const TreeDecomposition& td, int v_t,
                            const Hypergraph& h);

struct InferenceResult {
  Mhg mhg;
  std::vector<ParseSequence> sequences;  // one per input, leftmost order
};

// decompose -> irredundant repair -> rule extraction over all tree nodes ->
// dedup by canonical key. Replaying sequences[i] reproduces input i.
InferenceResult infer(const std::vector<Hypergraph>& hypergraphs);

// Parse sequence of h against an existing grammar. Throws NotInLanguage
// when any extracted rule has no canonical match in mhg.
ParseSequence encode(const Mhg& mhg, const Hypergraph& h);

// External nodes have rhs degree 1 and internal nodes degree 2.
bool check_condition1(const ProductionRule& rule);

struct GrammarStats {
  int total_rules = 0;
  int start_rules = 0;
  double mean_rules_per_molecule = 0.0;
  double coverage = 1.0;
  bool coverage_vacuous = false;  // empty held-out set
  std::vector<long> rule_frequency;  // indexed by rule id, over train
};

GrammarStats grammar_stats(const Mhg& mhg,
                           const std::vector<Hypergraph>& train,
                           const std::vector<Hypergraph>& heldout);

}  // namespace mhg

#endif  // MHG_INFERENCE_HPP
