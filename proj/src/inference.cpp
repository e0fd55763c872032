#include "mhg/inference.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "mhg/errors.hpp"

namespace mhg {

ProductionRule extract_rule(const TreeDecomposition& td, int v_t,
                            const Hypergraph& h) {
  const auto& node = td.tree[v_t];
  ProductionRule rule;

  std::vector<NodeId> shared_with_parent;
  if (node.parent < 0) {
    rule.lhs = HyperedgeLabel::start();
  } else {
    const auto& parent_nodes = td.tree[node.parent].nodes;
    std::set_intersection(node.nodes.begin(), node.nodes.end(),
                          parent_nodes.begin(), parent_nodes.end(),
                          std::back_inserter(shared_with_parent));
    std::vector<BondLabel> labels;
    for (NodeId v : shared_with_parent) labels.push_back(h.node_label(v));
    rule.lhs = HyperedgeLabel::nonterminal(std::move(labels));
  }

  // Local node numbering: external nodes first (shared order), then the
  // remaining nodes ascending.
  std::map<NodeId, NodeId> local_of;
  for (NodeId v : shared_with_parent) {
    local_of[v] = rule.rhs.add_node(h.node_label(v));
    rule.external.push_back(local_of[v]);
  }
  for (NodeId v : node.nodes) {
    if (!local_of.count(v)) local_of[v] = rule.rhs.add_node(h.node_label(v));
  }

  for (HyperedgeId e : node.hyperedges) {
    const Hyperedge& he = h.hyperedge(e);
    std::vector<NodeId> members;
    for (NodeId m : he.members) members.push_back(local_of.at(m));
    rule.rhs.add_hyperedge(he.label, std::move(members));
  }
  for (int child : node.children) {
    const auto& child_nodes = td.tree[child].nodes;
    std::vector<NodeId> shared;
    std::set_intersection(node.nodes.begin(), node.nodes.end(),
                          child_nodes.begin(), child_nodes.end(),
                          std::back_inserter(shared));
    std::vector<BondLabel> labels;
    std::vector<NodeId> members;
    for (NodeId v : shared) {
      labels.push_back(h.node_label(v));
      members.push_back(local_of.at(v));
    }
    HyperedgeId nt = rule.rhs.add_hyperedge(
        HyperedgeLabel::nonterminal(std::move(labels)), std::move(members));
    rule.nonterminals.push_back(nt);
  }
  return rule;
}

namespace {

struct RuleTree {
  CanonicalRule canon;
  std::vector<RuleTree> children;
};

// Children are reordered into the canonical rule's non-terminal order, so a
// pre-order flattening is the leftmost parse sequence for the stored rules.
RuleTree build_rule_tree(const TreeDecomposition& td, int v_t,
                         const Hypergraph& h) {
  RuleTree tree;
  tree.canon = canonicalize(extract_rule(td, v_t, h));
  const auto& children = td.tree[v_t].children;
  tree.children.resize(children.size());
  for (std::size_t i = 0; i < children.size(); ++i) {
    tree.children[tree.canon.nt_permutation[i]] =
        build_rule_tree(td, children[i], h);
  }
  return tree;
}

void flatten(const RuleTree& tree,
             const std::function<int(const CanonicalRule&)>& resolve,
             ParseSequence& out) {
  out.push_back(resolve(tree.canon));
  for (const RuleTree& child : tree.children) flatten(child, resolve, out);
}

ParseSequence sequence_for(const Hypergraph& h,
                           const std::function<int(const CanonicalRule&)>&
                               resolve) {
  // Relabeling first makes the whole pipeline isomorphism-invariant:
  // id-based conventions (shared-node order, root tie-breaks) see the same
  // ids for isomorphic inputs.
  Hypergraph canon = canonicalize_hypergraph(h);
  TreeDecomposition td = decompose(canon);
  RuleTree tree = build_rule_tree(td, td.root, canon);
  ParseSequence seq;
  flatten(tree, resolve, seq);
  return seq;
}

}  // namespace

InferenceResult infer(const std::vector<Hypergraph>& hypergraphs) {
  InferenceResult result;
  for (const Hypergraph& h : hypergraphs) {
    result.sequences.push_back(sequence_for(
        h, [&](const CanonicalRule& canon) {
          return result.mhg.add_rule(canon).first;
        }));
  }
  return result;
}

ParseSequence encode(const Mhg& mhg, const Hypergraph& h) {
  return sequence_for(h, [&](const CanonicalRule& canon) {
    int id = mhg.find_by_key(canon.key);
    if (id < 0) {
      throw NotInLanguage("extracted rule with lhs " +
                          hyperedge_label_to_string(canon.rule.lhs) +
                          " is not in the grammar");
    }
    return id;
  });
}

bool check_condition1(const ProductionRule& rule) {
  const Hypergraph& rhs = rule.rhs;
  std::vector<int> degree(rhs.node_count(), 0);
  for (HyperedgeId e = 0; e < rhs.hyperedge_count(); ++e) {
    for (NodeId m : rhs.hyperedge(e).members) ++degree[m];
  }
  std::vector<bool> external(rhs.node_count(), false);
  for (NodeId v : rule.external) external[v] = true;
  for (NodeId v = 0; v < rhs.node_count(); ++v) {
    if (degree[v] != (external[v] ? 1 : 2)) return false;
  }
  return true;
}

GrammarStats grammar_stats(const Mhg& mhg,
                           const std::vector<Hypergraph>& train,
                           const std::vector<Hypergraph>& heldout) {
  GrammarStats stats;
  stats.total_rules = mhg.rule_count();
  stats.start_rules = static_cast<int>(mhg.start_rules().size());
  stats.rule_frequency.assign(mhg.rule_count(), 0);

  long total_length = 0;
  for (const Hypergraph& h : train) {
    ParseSequence seq = encode(mhg, h);
    total_length += static_cast<long>(seq.size());
    for (int id : seq) ++stats.rule_frequency[id];
  }
  stats.mean_rules_per_molecule =
      train.empty() ? 0.0
                    : static_cast<double>(total_length) /
                          static_cast<double>(train.size());

  if (heldout.empty()) {
    stats.coverage = 1.0;
    stats.coverage_vacuous = true;
    return stats;
  }
  int covered = 0;
  for (const Hypergraph& h : heldout) {
    try {
      encode(mhg, h);
      ++covered;
    } catch (const NotInLanguage&) {
    }
  }
  stats.coverage =
      static_cast<double>(covered) / static_cast<double>(heldout.size());
  return stats;
}

}  // namespace mhg
