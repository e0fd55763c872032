#include "mhg/grammar.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include "mhg/errors.hpp"

namespace mhg {

namespace {

void append_atom_label(std::ostringstream& out, const AtomLabel& a) {
  out << static_cast<int>(a.element) << ',' << a.charge << ',' << a.implicit_h
      << ',' << a.valence << ',' << static_cast<int>(a.chirality);
}

void append_bond_label(std::ostringstream& out, const BondLabel& b) {
  out << b.order << ',' << static_cast<int>(b.ez);
}

std::string label_bytes(const HyperedgeLabel& label) {
  std::ostringstream out;
  switch (label.kind) {
    case HyperedgeLabel::Kind::Start:
      out << "S";
      break;
    case HyperedgeLabel::Kind::Terminal:
      out << "T(";
      append_atom_label(out, label.atom);
      out << ")";
      break;
    case HyperedgeLabel::Kind::NonTerminal:
      out << "N(";
      for (std::size_t i = 0; i < label.node_labels.size(); ++i) {
        if (i) out << ';';
        append_bond_label(out, label.node_labels[i]);
      }
      out << ")";
      break;
  }
  return out.str();
}

std::string bond_bytes(const BondLabel& b) {
  std::ostringstream out;
  append_bond_label(out, b);
  return out.str();
}

// Fixed-width so lexicographic key order matches numeric color order; the
// refinement is then order-preserving and reaches a fixpoint.
std::string pad(int value) {
  std::string digits = std::to_string(value);
  return std::string(6 - digits.size(), '0') + digits;
}

// Iterative color refinement on the rule's incidence structure. External
// nodes carry their position as part of the initial color, so they stay
// pinned in external order.
class RuleCanonicalizer {
 public:
  explicit RuleCanonicalizer(const ProductionRule& rule) : rule_(rule) {
    n_ = rule.rhs.node_count();
    m_ = rule.rhs.hyperedge_count();
    ext_index_.assign(n_, -1);
    for (std::size_t i = 0; i < rule.external.size(); ++i) {
      ext_index_[rule.external[i]] = static_cast<int>(i);
    }
    incidences_.assign(n_, {});
    for (HyperedgeId e = 0; e < m_; ++e) {
      const Hyperedge& he = rule.rhs.hyperedge(e);
      bool positional = he.label.kind != HyperedgeLabel::Kind::Terminal;
      for (std::size_t p = 0; p < he.members.size(); ++p) {
        incidences_[he.members[p]].push_back(
            {e, positional ? static_cast<int>(p) : -1});
      }
    }
  }

  CanonicalRule run() {
    std::vector<int> node_color(n_), edge_color(m_);
    initial_colors(node_color, edge_color);
    refine(node_color, edge_color);
    search(node_color, edge_color);
    if (!best_) throw Error("canonical labeling failed");
    return build(best_->order);
  }

 private:
  struct Leaf {
    std::vector<int> order;  // node id -> canonical rank
    std::string cert;
  };

  void initial_colors(std::vector<int>& node_color,
                      std::vector<int>& edge_color) const {
    std::vector<std::string> node_keys(n_), edge_keys(m_);
    for (NodeId v = 0; v < n_; ++v) {
      std::ostringstream key;
      key << (ext_index_[v] >= 0 ? 0 : 1) << ':' << pad(ext_index_[v] + 1)
          << ':' << bond_bytes(rule_.rhs.node_label(v));
      node_keys[v] = key.str();
    }
    for (HyperedgeId e = 0; e < m_; ++e) {
      edge_keys[e] = label_bytes(rule_.rhs.hyperedge(e).label);
    }
    assign_colors(node_keys, node_color);
    assign_colors(edge_keys, edge_color);
  }

  static void assign_colors(const std::vector<std::string>& keys,
                            std::vector<int>& colors) {
    std::vector<std::string> sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      colors[i] = static_cast<int>(
          std::lower_bound(sorted.begin(), sorted.end(), keys[i]) -
          sorted.begin());
    }
  }

  void refine(std::vector<int>& node_color, std::vector<int>& edge_color) const {
    while (true) {
      std::vector<std::string> node_keys(n_), edge_keys(m_);
      for (NodeId v = 0; v < n_; ++v) {
        std::vector<std::string> parts;
        for (const auto& [e, pos] : incidences_[v]) {
          parts.push_back(pad(edge_color[e]) + "@" + pad(pos + 1));
        }
        std::sort(parts.begin(), parts.end());
        std::ostringstream key;
        key << pad(node_color[v]);
        for (const auto& p : parts) key << '|' << p;
        node_keys[v] = key.str();
      }
      for (HyperedgeId e = 0; e < m_; ++e) {
        const Hyperedge& he = rule_.rhs.hyperedge(e);
        std::vector<std::string> parts;
        for (NodeId mbr : he.members) {
          parts.push_back(pad(node_color[mbr]));
        }
        if (he.label.kind == HyperedgeLabel::Kind::Terminal) {
          std::sort(parts.begin(), parts.end());
        }
        std::ostringstream key;
        key << pad(edge_color[e]);
        for (const auto& p : parts) key << '|' << p;
        edge_keys[e] = key.str();
      }
      std::vector<int> new_node(n_), new_edge(m_);
      assign_colors(node_keys, new_node);
      assign_colors(edge_keys, new_edge);
      if (new_node == node_color && new_edge == edge_color) return;
      node_color = std::move(new_node);
      edge_color = std::move(new_edge);
    }
  }

  // Individualize members of the first non-singleton node color class and
  // recurse; every complete discrete coloring yields a candidate ordering.
  void search(std::vector<int> node_color, std::vector<int> edge_color) {
    refine(node_color, edge_color);
    int target_color = -1;
    std::vector<NodeId> cell;
    for (int color = 0;; ++color) {
      cell.clear();
      int max_color = -1;
      for (NodeId v = 0; v < n_; ++v) {
        max_color = std::max(max_color, node_color[v]);
        if (node_color[v] == color) cell.push_back(v);
      }
      if (cell.size() > 1) {
        target_color = color;
        break;
      }
      if (color >= max_color) break;
    }
    if (target_color < 0) {
      finish(node_color);
      return;
    }
    if (++branches_ > 100000) {
      throw Error("canonical labeling search exceeded its branch budget");
    }
    for (NodeId v : cell) {
      std::vector<int> nc = node_color;
      // Lift v out of its class; keep all colors distinct.
      for (NodeId w = 0; w < n_; ++w) {
        if (nc[w] >= target_color && w != v) ++nc[w];
      }
      search(std::move(nc), edge_color);
    }
  }

  void finish(const std::vector<int>& node_color) {
    // Discrete coloring: color value is the canonical rank.
    std::vector<int> order(n_);
    for (NodeId v = 0; v < n_; ++v) order[v] = node_color[v];
    std::string cert = certificate(order);
    if (!best_ || cert < best_->cert) best_ = Leaf{order, std::move(cert)};
  }

  // Hyperedges sorted by (label bytes, canonical member list).
  std::vector<HyperedgeId> edge_order(const std::vector<int>& order) const {
    std::vector<std::pair<std::string, HyperedgeId>> keyed;
    for (HyperedgeId e = 0; e < m_; ++e) {
      const Hyperedge& he = rule_.rhs.hyperedge(e);
      std::vector<int> members;
      for (NodeId mbr : he.members) members.push_back(order[mbr]);
      if (he.label.kind == HyperedgeLabel::Kind::Terminal) {
        std::sort(members.begin(), members.end());
      }
      std::ostringstream key;
      key << label_bytes(he.label) << ':';
      for (int mbr : members) key << mbr << ',';
      keyed.emplace_back(key.str(), e);
    }
    std::stable_sort(keyed.begin(), keyed.end());
    std::vector<HyperedgeId> result;
    for (const auto& [key, e] : keyed) result.push_back(e);
    return result;
  }

  std::string certificate(const std::vector<int>& order) const {
    std::vector<NodeId> inverse(n_);
    for (NodeId v = 0; v < n_; ++v) inverse[order[v]] = v;
    std::ostringstream out;
    out << "L:" << label_bytes(rule_.lhs) << "|n:" << n_ << "|x:"
        << rule_.external.size() << "|";
    for (int rank = 0; rank < n_; ++rank) {
      out << bond_bytes(rule_.rhs.node_label(inverse[rank])) << ';';
    }
    out << "|e:" << m_ << "|";
    for (HyperedgeId e : edge_order(order)) {
      const Hyperedge& he = rule_.rhs.hyperedge(e);
      std::vector<int> members;
      for (NodeId mbr : he.members) members.push_back(order[mbr]);
      if (he.label.kind == HyperedgeLabel::Kind::Terminal) {
        std::sort(members.begin(), members.end());
      }
      out << label_bytes(he.label) << ':';
      for (int mbr : members) out << mbr << ',';
      out << ';';
    }
    return out.str();
  }

  CanonicalRule build(const std::vector<int>& order) const {
    std::vector<NodeId> inverse(n_);
    for (NodeId v = 0; v < n_; ++v) inverse[order[v]] = v;
    CanonicalRule canon;
    canon.rule.lhs = rule_.lhs;
    for (int rank = 0; rank < n_; ++rank) {
      canon.rule.rhs.add_node(rule_.rhs.node_label(inverse[rank]));
    }
    auto edges = edge_order(order);
    std::vector<int> edge_rank(m_);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      edge_rank[edges[i]] = static_cast<int>(i);
    }
    for (HyperedgeId e : edges) {
      const Hyperedge& he = rule_.rhs.hyperedge(e);
      std::vector<NodeId> members;
      for (NodeId mbr : he.members) members.push_back(order[mbr]);
      if (he.label.kind == HyperedgeLabel::Kind::Terminal) {
        std::sort(members.begin(), members.end());
      }
      canon.rule.rhs.add_hyperedge(he.label, std::move(members));
    }
    for (std::size_t i = 0; i < rule_.external.size(); ++i) {
      canon.rule.external.push_back(static_cast<NodeId>(i));
    }
    // Canonical non-terminal order is their certificate order.
    std::vector<std::pair<int, HyperedgeId>> nts;
    for (HyperedgeId e = 0; e < m_; ++e) {
      if (rule_.rhs.hyperedge(e).label.kind ==
          HyperedgeLabel::Kind::NonTerminal) {
        nts.emplace_back(edge_rank[e], e);
      }
    }
    std::sort(nts.begin(), nts.end());
    std::vector<int> canonical_pos_of_edge(m_, -1);
    for (std::size_t i = 0; i < nts.size(); ++i) {
      canon.rule.nonterminals.push_back(nts[i].first);
      canonical_pos_of_edge[nts[i].second] = static_cast<int>(i);
    }
    for (HyperedgeId e : rule_.nonterminals) {
      canon.nt_permutation.push_back(canonical_pos_of_edge[e]);
    }
    canon.key = certificate(order);
    return canon;
  }

  const ProductionRule& rule_;
  int n_ = 0;
  int m_ = 0;
  std::vector<int> ext_index_;
  std::vector<std::vector<std::pair<HyperedgeId, int>>> incidences_;
  std::optional<Leaf> best_;
  long branches_ = 0;
};

}  // namespace

CanonicalRule canonicalize(const ProductionRule& rule) {
  return RuleCanonicalizer(rule).run();
}

std::string canonical_key(const ProductionRule& rule) {
  return canonicalize(rule).key;
}

Hypergraph canonicalize_hypergraph(const Hypergraph& h) {
  ProductionRule wrapper;
  wrapper.lhs = HyperedgeLabel::start();
  wrapper.rhs = h;
  return canonicalize(wrapper).rule.rhs;
}

std::pair<int, bool> Mhg::add_rule(const CanonicalRule& canon) {
  auto it = by_key_.find(canon.key);
  if (it != by_key_.end()) return {it->second, false};
  int id = static_cast<int>(rules_.size());
  rules_.push_back(canon.rule);
  keys_.push_back(canon.key);
  by_key_[canon.key] = id;
  by_lhs_[canon.rule.lhs].push_back(id);
  if (canon.rule.is_start()) start_rules_.push_back(id);
  return {id, true};
}

const std::vector<int>& Mhg::rules_with_lhs(const HyperedgeLabel& label) const {
  static const std::vector<int> empty;
  auto it = by_lhs_.find(label);
  return it == by_lhs_.end() ? empty : it->second;
}

int Mhg::find_by_key(const std::string& key) const {
  auto it = by_key_.find(key);
  return it == by_key_.end() ? -1 : it->second;
}

Hypergraph apply_rule(const Hypergraph& h, HyperedgeId occurrence,
                      const ProductionRule& rule) {
  if (occurrence < 0 || occurrence >= h.hyperedge_count()) {
    throw OccurrenceNotFound("hyperedge " + std::to_string(occurrence) +
                             " does not exist");
  }
  const Hyperedge& occ = h.hyperedge(occurrence);
  if (occ.label.kind != HyperedgeLabel::Kind::NonTerminal) {
    throw OccurrenceNotFound("hyperedge " + std::to_string(occurrence) +
                             " is not a non-terminal");
  }
  if (occ.label != rule.lhs) {
    throw LabelMismatch("occurrence label " +
                        hyperedge_label_to_string(occ.label) +
                        " does not match rule lhs " +
                        hyperedge_label_to_string(rule.lhs));
  }

  Hypergraph out;
  for (const BondLabel& label : h.node_labels()) out.add_node(label);
  std::vector<NodeId> map(rule.rhs.node_count(), -1);
  for (std::size_t i = 0; i < rule.external.size(); ++i) {
    map[rule.external[i]] = occ.members[i];
  }
  for (NodeId v = 0; v < rule.rhs.node_count(); ++v) {
    if (map[v] < 0) map[v] = out.add_node(rule.rhs.node_label(v));
  }
  for (HyperedgeId e = 0; e < h.hyperedge_count(); ++e) {
    if (e == occurrence) continue;
    out.add_hyperedge(h.hyperedge(e).label, h.hyperedge(e).members);
  }
  for (HyperedgeId e = 0; e < rule.rhs.hyperedge_count(); ++e) {
    const Hyperedge& he = rule.rhs.hyperedge(e);
    std::vector<NodeId> members;
    for (NodeId mbr : he.members) members.push_back(map[mbr]);
    out.add_hyperedge(he.label, std::move(members));
  }
  return out;
}

namespace {

// Working state for leftmost replay: hyperedges are tombstoned rather than
// erased so pending ids stay stable.
struct Replay {
  std::vector<BondLabel> nodes;
  std::vector<std::optional<Hyperedge>> edges;
  std::deque<int> pending;

  void splice(const ProductionRule& rule, const std::vector<NodeId>& host) {
    std::vector<NodeId> map(rule.rhs.node_count(), -1);
    for (std::size_t i = 0; i < rule.external.size(); ++i) {
      map[rule.external[i]] = host[i];
    }
    for (NodeId v = 0; v < rule.rhs.node_count(); ++v) {
      if (map[v] < 0) {
        map[v] = static_cast<NodeId>(nodes.size());
        nodes.push_back(rule.rhs.node_label(v));
      }
    }
    std::vector<int> ids(rule.rhs.hyperedge_count());
    for (HyperedgeId e = 0; e < rule.rhs.hyperedge_count(); ++e) {
      const Hyperedge& he = rule.rhs.hyperedge(e);
      Hyperedge copy;
      copy.label = he.label;
      for (NodeId mbr : he.members) copy.members.push_back(map[mbr]);
      ids[e] = static_cast<int>(edges.size());
      edges.push_back(std::move(copy));
    }
    for (auto it = rule.nonterminals.rbegin(); it != rule.nonterminals.rend();
         ++it) {
      pending.push_front(ids[*it]);
    }
  }

  Hypergraph compact() const {
    Hypergraph out;
    for (const BondLabel& label : nodes) out.add_node(label);
    for (const auto& he : edges) {
      if (he) out.add_hyperedge(he->label, he->members);
    }
    return out;
  }
};

}  // namespace

Hypergraph derive(const Mhg& mhg, const ParseSequence& seq) {
  if (seq.empty()) throw InvalidSequence("empty parse sequence");
  for (int id : seq) {
    if (id < 0 || id >= mhg.rule_count()) {
      throw InvalidSequence("rule id " + std::to_string(id) + " out of range");
    }
  }
  const ProductionRule& first = mhg.rule(seq[0]);
  if (!first.is_start()) {
    throw InvalidSequence("sequence does not begin with a start rule");
  }

  Replay state;
  state.splice(first, {});
  for (std::size_t k = 1; k < seq.size(); ++k) {
    if (state.pending.empty()) {
      throw InvalidSequence("rule at position " + std::to_string(k) +
                            " follows a completed derivation");
    }
    const ProductionRule& rule = mhg.rule(seq[k]);
    int occ = state.pending.front();
    state.pending.pop_front();
    if (state.edges[occ]->label != rule.lhs) {
      throw InvalidSequence(
          "rule lhs " + hyperedge_label_to_string(rule.lhs) +
          " does not match leftmost non-terminal " +
          hyperedge_label_to_string(state.edges[occ]->label) +
          " at position " + std::to_string(k));
    }
    std::vector<NodeId> host = state.edges[occ]->members;
    state.edges[occ].reset();
    state.splice(rule, host);
  }
  if (!state.pending.empty()) {
    throw InvalidSequence("sequence ends with " +
                          std::to_string(state.pending.size()) +
                          " unexpanded non-terminals");
  }
  return state.compact();
}

namespace {

constexpr int kInfiniteSize = std::numeric_limits<int>::max() / 4;
constexpr int kRestrictDepth = 12;

struct SizeTables {
  std::map<HyperedgeLabel, int> label_size;  // minimal completion size
  std::vector<int> rule_size;                // 1 + sum of child minima
};

// Minimal number of rule applications needed to reach an all-terminal
// hypergraph from each label / via each rule, by fixpoint iteration.
SizeTables compute_sizes(const Mhg& mhg) {
  SizeTables tables;
  tables.rule_size.assign(mhg.rule_count(), kInfiniteSize);
  auto label_size = [&](const HyperedgeLabel& l) {
    auto it = tables.label_size.find(l);
    return it == tables.label_size.end() ? kInfiniteSize : it->second;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < mhg.rule_count(); ++i) {
      const ProductionRule& rule = mhg.rule(i);
      long size = 1;
      for (HyperedgeId e : rule.nonterminals) {
        size += label_size(rule.rhs.hyperedge(e).label);
      }
      size = std::min<long>(size, kInfiniteSize);
      if (size < tables.rule_size[i]) {
        tables.rule_size[i] = static_cast<int>(size);
        changed = true;
      }
      if (size < label_size(rule.lhs)) {
        tables.label_size[rule.lhs] = static_cast<int>(size);
        changed = true;
      }
    }
  }
  return tables;
}

}  // namespace

// Every step keeps expansions_done + (minimal cost of everything pending)
// within the budget, so a sampled derivation always completes. Beyond the
// depth threshold only minimal-size rules are drawn, which keeps typical
// samples near corpus-sized molecules instead of budget-fillers.
ParseSequence sample_completion(const Mhg& mhg, const HyperedgeLabel& root,
                                Rng& rng, int max_expansions) {
  SizeTables tables = compute_sizes(mhg);
  auto label_size = [&](const HyperedgeLabel& l) {
    auto it = tables.label_size.find(l);
    return it == tables.label_size.end() ? kInfiniteSize : it->second;
  };

  ParseSequence seq;
  std::deque<std::pair<HyperedgeLabel, int>> pending{{root, 0}};
  long done = 0;
  long reserved = label_size(root);  // minimal cost of all pending labels
  if (reserved >= kInfiniteSize || reserved > max_expansions) {
    throw BudgetExceeded("no derivation from " +
                         hyperedge_label_to_string(root) + " fits in " +
                         std::to_string(max_expansions) + " expansions");
  }
  while (!pending.empty()) {
    auto [label, depth] = pending.front();
    pending.pop_front();
    reserved -= label_size(label);

    const std::vector<int>& applicable = mhg.rules_with_lhs(label);
    std::vector<int> feasible;
    int minimal = kInfiniteSize;
    for (int id : applicable) {
      minimal = std::min(minimal, tables.rule_size[id]);
    }
    for (int id : applicable) {
      int size = tables.rule_size[id];
      if (size >= kInfiniteSize) continue;
      if (depth >= kRestrictDepth && size != minimal) continue;
      if (done + 1 + reserved + (size - 1) > max_expansions) continue;
      feasible.push_back(id);
    }
    if (feasible.empty()) {
      throw BudgetExceeded("no rule for label " +
                           hyperedge_label_to_string(label) +
                           " fits the remaining budget");
    }
    int rule_id = feasible[rng.below(feasible.size())];
    seq.push_back(rule_id);
    ++done;
    const ProductionRule& rule = mhg.rule(rule_id);
    for (auto it = rule.nonterminals.rbegin(); it != rule.nonterminals.rend();
         ++it) {
      const HyperedgeLabel& child = rule.rhs.hyperedge(*it).label;
      pending.emplace_front(child, depth + 1);
      reserved += label_size(child);
    }
  }
  return seq;
}

ParseSequence sample_derivation(const Mhg& mhg, std::uint64_t seed,
                                int max_expansions) {
  if (max_expansions < 1) throw BudgetExceeded("max_expansions must be >= 1");
  Rng rng(seed);
  return sample_completion(mhg, HyperedgeLabel::start(), rng, max_expansions);
}

std::vector<int> subtree_spans(const Mhg& mhg, const ParseSequence& seq) {
  std::vector<int> end(seq.size(), 0);
  std::size_t pos = 0;
  std::function<void(const HyperedgeLabel&)> walk =
      [&](const HyperedgeLabel& expected) {
        if (pos >= seq.size()) {
          throw InvalidSequence("sequence ended with non-terminals pending");
        }
        std::size_t here = pos++;
        int id = seq[here];
        if (id < 0 || id >= mhg.rule_count()) {
          throw InvalidSequence("rule id out of range");
        }
        const ProductionRule& rule = mhg.rule(id);
        if (rule.lhs != expected) {
          throw InvalidSequence("rule lhs mismatch at position " +
                                std::to_string(here));
        }
        for (HyperedgeId e : rule.nonterminals) {
          walk(rule.rhs.hyperedge(e).label);
        }
        end[here] = static_cast<int>(pos);
      };
  walk(HyperedgeLabel::start());
  if (pos != seq.size()) {
    throw InvalidSequence("trailing rules after a completed derivation");
  }
  return end;
}

}  // namespace mhg
