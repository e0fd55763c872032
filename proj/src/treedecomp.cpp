#include "mhg/treedecomp.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <set>

#include "mhg/errors.hpp"

namespace mhg {

bool TreeDecomposition::contains_node(int t, NodeId v) const {
  const auto& nodes = tree[t].nodes;
  return std::binary_search(nodes.begin(), nodes.end(), v);
}

std::vector<int> TreeDecomposition::region_of(NodeId v) const {
  std::vector<int> region;
  for (int t = 0; t < size(); ++t) {
    if (contains_node(t, v)) region.push_back(t);
  }
  return region;
}

namespace {

// Mutable unrooted tree used during construction.
struct MutNode {
  std::vector<NodeId> nodes;
  std::vector<HyperedgeId> hyperedges;
  std::vector<int> adj;
  bool is_part = false;  // still waiting to be refined
};

void replace_neighbor(std::vector<MutNode>& tree, int node, int old_nbr,
                      int new_nbr) {
  for (int& a : tree[node].adj) {
    if (a == old_nbr) {
      a = new_nbr;
      return;
    }
  }
}

// Connected components of the part's hyperedges when node `cut` is ignored;
// hyperedges are adjacent when they share any other node.
std::vector<std::vector<HyperedgeId>> split_components(
    const Hypergraph& h, const std::vector<HyperedgeId>& edges, NodeId cut) {
  std::map<NodeId, std::vector<int>> by_node;  // node -> indices into edges
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (NodeId m : h.hyperedge(edges[i]).members) {
      if (m != cut) by_node[m].push_back(static_cast<int>(i));
    }
  }
  std::vector<int> component(edges.size(), -1);
  int count = 0;
  for (std::size_t start = 0; start < edges.size(); ++start) {
    if (component[start] >= 0) continue;
    std::queue<int> q;
    q.push(static_cast<int>(start));
    component[start] = count;
    while (!q.empty()) {
      int i = q.front();
      q.pop();
      for (NodeId m : h.hyperedge(edges[i]).members) {
        if (m == cut) continue;
        for (int j : by_node[m]) {
          if (component[j] < 0) {
            component[j] = count;
            q.push(j);
          }
        }
      }
    }
    ++count;
  }
  std::vector<std::vector<HyperedgeId>> result(count);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    result[component[i]].push_back(edges[i]);
  }
  return result;
}

std::vector<NodeId> part_nodes(const Hypergraph& h,
                               const std::vector<HyperedgeId>& edges) {
  std::set<NodeId> nodes;
  for (HyperedgeId e : edges) {
    for (NodeId m : h.hyperedge(e).members) nodes.insert(m);
  }
  return {nodes.begin(), nodes.end()};
}

int degree_within(const Hypergraph& h, const std::vector<HyperedgeId>& edges,
                  NodeId v) {
  int count = 0;
  for (HyperedgeId e : edges) {
    const auto& members = h.hyperedge(e).members;
    count += static_cast<int>(std::count(members.begin(), members.end(), v));
  }
  return count;
}

// Root the mutable tree and produce the final structure. Children keep the
// adjacency insertion order.
TreeDecomposition finalize(const std::vector<MutNode>& mut, int root) {
  TreeDecomposition td;
  td.tree.resize(mut.size());
  td.root = root;
  for (std::size_t i = 0; i < mut.size(); ++i) {
    td.tree[i].nodes = mut[i].nodes;
    td.tree[i].hyperedges = mut[i].hyperedges;
    std::sort(td.tree[i].nodes.begin(), td.tree[i].nodes.end());
    std::sort(td.tree[i].hyperedges.begin(), td.tree[i].hyperedges.end());
  }
  std::vector<bool> seen(mut.size(), false);
  std::deque<int> frontier{root};
  seen[root] = true;
  while (!frontier.empty()) {
    int t = frontier.front();
    frontier.pop_front();
    for (int nbr : mut[t].adj) {
      if (seen[nbr]) continue;
      seen[nbr] = true;
      td.tree[nbr].parent = t;
      td.tree[t].children.push_back(nbr);
      frontier.push_back(nbr);
    }
  }
  return td;
}

std::string pad6(int value) {
  std::string digits = std::to_string(value);
  return std::string(6 - digits.size(), '0') + digits;
}

// Color refinement over the incidence structure. The resulting color ids are
// derived from sorted structural keys, so corresponding hyperedges of
// isomorphic hypergraphs receive equal colors.
std::vector<int> stable_hyperedge_colors(const Hypergraph& h) {
  const int n = h.node_count();
  const int m = h.hyperedge_count();
  auto assign = [](const std::vector<std::string>& keys, std::vector<int>& out) {
    std::vector<std::string> sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    out.resize(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      out[i] = static_cast<int>(
          std::lower_bound(sorted.begin(), sorted.end(), keys[i]) -
          sorted.begin());
    }
  };

  std::vector<std::vector<HyperedgeId>> incident(n);
  for (HyperedgeId e = 0; e < m; ++e) {
    for (NodeId v : h.hyperedge(e).members) incident[v].push_back(e);
  }

  std::vector<int> node_color, edge_color;
  {
    std::vector<std::string> node_keys(n), edge_keys(m);
    for (NodeId v = 0; v < n; ++v) {
      node_keys[v] = bond_label_to_string(h.node_label(v));
    }
    for (HyperedgeId e = 0; e < m; ++e) {
      edge_keys[e] = hyperedge_label_to_string(h.hyperedge(e).label);
    }
    assign(node_keys, node_color);
    assign(edge_keys, edge_color);
  }
  while (true) {
    std::vector<std::string> node_keys(n), edge_keys(m);
    for (NodeId v = 0; v < n; ++v) {
      std::vector<std::string> parts;
      for (HyperedgeId e : incident[v]) parts.push_back(pad6(edge_color[e]));
      std::sort(parts.begin(), parts.end());
      node_keys[v] = pad6(node_color[v]);
      for (const auto& p : parts) node_keys[v] += "|" + p;
    }
    for (HyperedgeId e = 0; e < m; ++e) {
      std::vector<std::string> parts;
      for (NodeId v : h.hyperedge(e).members) parts.push_back(pad6(node_color[v]));
      std::sort(parts.begin(), parts.end());
      edge_keys[e] = pad6(edge_color[e]);
      for (const auto& p : parts) edge_keys[e] += "|" + p;
    }
    std::vector<int> new_node, new_edge;
    assign(node_keys, new_node);
    assign(edge_keys, new_edge);
    if (new_node == node_color && new_edge == edge_color) break;
    node_color = std::move(new_node);
    edge_color = std::move(new_edge);
  }
  return edge_color;
}

// Root hyperedge: lexicographically smallest terminal label, refined-color
// tiebreak (so isomorphic inputs root at corresponding hyperedges), then
// lowest id.
int select_root(const std::vector<MutNode>& mut, const Hypergraph& h) {
  std::vector<int> colors = stable_hyperedge_colors(h);
  HyperedgeId best = -1;
  std::pair<std::string, int> best_key;
  for (HyperedgeId e = 0; e < h.hyperedge_count(); ++e) {
    std::pair<std::string, int> key{
        hyperedge_label_to_string(h.hyperedge(e).label), colors[e]};
    if (best < 0 || key < best_key) {
      best = e;
      best_key = key;
    }
  }
  for (std::size_t t = 0; t < mut.size(); ++t) {
    const auto& edges = mut[t].hyperedges;
    if (std::find(edges.begin(), edges.end(), best) != edges.end()) {
      return static_cast<int>(t);
    }
  }
  throw Error("root hyperedge not assigned to any tree node");
}

}  // namespace

TreeDecomposition decompose(const Hypergraph& h) {
  auto violations = check_molecular_hypergraph(h);
  if (!violations.empty()) {
    throw Error("decompose requires a molecular hypergraph: " +
                violations.front().message);
  }

  std::vector<MutNode> mut;
  {
    MutNode whole;
    whole.nodes.resize(h.node_count());
    for (NodeId v = 0; v < h.node_count(); ++v) whole.nodes[v] = v;
    whole.hyperedges.resize(h.hyperedge_count());
    for (HyperedgeId e = 0; e < h.hyperedge_count(); ++e) {
      whole.hyperedges[e] = e;
    }
    whole.is_part = true;
    mut.push_back(std::move(whole));
  }

  std::deque<int> pending{0};
  while (!pending.empty()) {
    int t = pending.front();
    pending.pop_front();
    bool split = false;

    // Step 1: cut at a node whose removal disconnects the part. Candidates
    // must have both incident hyperedges inside the part; scanned in
    // ascending node id.
    for (NodeId v : mut[t].nodes) {
      if (degree_within(h, mut[t].hyperedges, v) != 2) continue;
      auto components = split_components(h, mut[t].hyperedges, v);
      if (components.size() < 2) continue;

      int hub = static_cast<int>(mut.size());
      mut.push_back(MutNode{{v}, {}, {}, false});
      std::vector<int> part_ids;
      for (auto& comp : components) {
        int part = static_cast<int>(mut.size());
        MutNode p;
        p.hyperedges = std::move(comp);
        p.nodes = part_nodes(h, p.hyperedges);
        p.is_part = true;
        p.adj.push_back(hub);
        mut.push_back(std::move(p));
        mut[hub].adj.push_back(part);
        part_ids.push_back(part);
      }
      // Old neighbors (hubs holding one node each) follow their shared node.
      for (int nbr : mut[t].adj) {
        NodeId shared = mut[nbr].nodes.front();
        for (int part : part_ids) {
          const auto& nodes = mut[part].nodes;
          if (std::binary_search(nodes.begin(), nodes.end(), shared)) {
            replace_neighbor(mut, nbr, t, part);
            mut[part].adj.push_back(nbr);
            break;
          }
        }
      }
      // Old part becomes inert; mark empty so it is dropped later.
      mut[t].is_part = false;
      mut[t].adj.clear();
      mut[t].nodes.clear();
      mut[t].hyperedges.clear();
      for (int part : part_ids) pending.push_back(part);
      split = true;
      break;
    }
    if (split) continue;

    if (mut[t].hyperedges.size() <= 1) {
      mut[t].is_part = false;  // a single hyperedge; final leaf
      continue;
    }

    // Step 2: ring part. One hub holding every node of the part, one child
    // per hyperedge.
    MutNode hub;
    hub.nodes = mut[t].nodes;
    std::vector<HyperedgeId> edges = mut[t].hyperedges;
    std::vector<int> old_adj = mut[t].adj;
    int hub_id = t;  // reuse the slot
    mut[t].hyperedges.clear();
    mut[t].is_part = false;
    mut[t].adj.clear();
    for (int nbr : old_adj) {
      replace_neighbor(mut, nbr, t, hub_id);
      mut[hub_id].adj.push_back(nbr);
    }
    for (HyperedgeId e : edges) {
      int child = static_cast<int>(mut.size());
      MutNode c;
      c.nodes = h.hyperedge(e).members;
      std::sort(c.nodes.begin(), c.nodes.end());
      c.hyperedges = {e};
      c.adj.push_back(hub_id);
      mut.push_back(std::move(c));
      mut[hub_id].adj.push_back(child);
    }
  }

  // Drop inert empty slots left by step-1 splits.
  std::vector<int> remap(mut.size(), -1);
  std::vector<MutNode> compact;
  for (std::size_t i = 0; i < mut.size(); ++i) {
    if (mut[i].nodes.empty() && mut[i].hyperedges.empty() && mut[i].adj.empty()) {
      continue;
    }
    remap[i] = static_cast<int>(compact.size());
    compact.push_back(mut[i]);
  }
  for (auto& node : compact) {
    for (int& a : node.adj) a = remap[a];
  }

  int root = select_root(compact, h);
  TreeDecomposition td = finalize(compact, root);
  return make_irredundant(td, h);
}

TreeDecomposition make_irredundant(const TreeDecomposition& td,
                                   const Hypergraph& h) {
  TreeDecomposition out = td;

  auto bears_node = [&](int t, NodeId v) {
    for (HyperedgeId e : out.tree[t].hyperedges) {
      const auto& members = h.hyperedge(e).members;
      if (std::find(members.begin(), members.end(), v) != members.end()) {
        return true;
      }
    }
    return false;
  };
  auto neighbors = [&](int t) {
    std::vector<int> result = out.tree[t].children;
    if (out.tree[t].parent >= 0) result.push_back(out.tree[t].parent);
    return result;
  };

  for (NodeId v = 0; v < h.node_count(); ++v) {
    std::set<int> region;
    for (int t : out.region_of(v)) region.insert(t);
    if (region.empty()) {
      throw IrreparableDecomposition("node " + std::to_string(v) +
                                     " is not covered by the decomposition");
    }

    // Trim region leaves that hold no hyperedge incident to v.
    bool changed = true;
    while (changed) {
      changed = false;
      for (int t : std::vector<int>(region.begin(), region.end())) {
        int induced_degree = 0;
        for (int nbr : neighbors(t)) induced_degree += region.count(nbr);
        if (induced_degree <= 1 && !bears_node(t, v)) {
          if (region.size() == 1) {
            throw IrreparableDecomposition(
                "no tree node holds a hyperedge incident to node " +
                std::to_string(v));
          }
          region.erase(t);
          auto& nodes = out.tree[t].nodes;
          nodes.erase(std::remove(nodes.begin(), nodes.end(), v), nodes.end());
          changed = true;
        }
      }
    }
    // Every remaining bearer must now be a leaf of the induced subtree.
    for (int t : region) {
      int induced_degree = 0;
      for (int nbr : neighbors(t)) induced_degree += region.count(nbr);
      if (induced_degree > 1 && bears_node(t, v)) {
        throw IrreparableDecomposition(
            "hyperedge incident to node " + std::to_string(v) +
            " sits at an interior tree node; removal would disconnect the "
            "region");
      }
    }
  }
  return out;
}

std::vector<std::string> verify_decomposition(const TreeDecomposition& td,
                                              const Hypergraph& h) {
  std::vector<std::string> violations;
  if (td.root < 0 || td.root >= td.size()) {
    violations.push_back("missing or out-of-range root");
    return violations;
  }

  // Structural sanity: parent/children agree and all nodes hang off the root.
  int reached = 0;
  std::queue<int> q;
  q.push(td.root);
  std::vector<bool> seen(td.size(), false);
  seen[td.root] = true;
  while (!q.empty()) {
    int t = q.front();
    q.pop();
    ++reached;
    for (int c : td.tree[t].children) {
      if (c < 0 || c >= td.size() || td.tree[c].parent != t || seen[c]) {
        violations.push_back("malformed tree structure at node " +
                             std::to_string(t));
        return violations;
      }
      seen[c] = true;
      q.push(c);
    }
  }
  if (reached != td.size()) {
    violations.push_back("tree has unreachable nodes");
    return violations;
  }

  // Condition 1: node cover.
  for (NodeId v = 0; v < h.node_count(); ++v) {
    if (td.region_of(v).empty()) {
      violations.push_back("node " + std::to_string(v) +
                           " is not covered (condition 1)");
    }
  }
  // Condition 2: exactly one tree node per hyperedge, with containment.
  for (HyperedgeId e = 0; e < h.hyperedge_count(); ++e) {
    int holders = 0;
    for (int t = 0; t < td.size(); ++t) {
      const auto& edges = td.tree[t].hyperedges;
      if (!std::binary_search(edges.begin(), edges.end(), e)) continue;
      ++holders;
      for (NodeId m : h.hyperedge(e).members) {
        if (!td.contains_node(t, m)) {
          violations.push_back("hyperedge " + std::to_string(e) +
                               " not contained in its tree node's node set "
                               "(condition 2)");
          break;
        }
      }
    }
    if (holders != 1) {
      violations.push_back("hyperedge " + std::to_string(e) + " held by " +
                           std::to_string(holders) +
                           " tree nodes, expected exactly 1 (condition 2)");
    }
  }
  // Condition 3: connectivity of each node's region.
  for (NodeId v = 0; v < h.node_count(); ++v) {
    auto region = td.region_of(v);
    if (region.empty()) continue;
    std::set<int> in_region(region.begin(), region.end());
    std::set<int> visited;
    std::queue<int> frontier;
    frontier.push(region.front());
    visited.insert(region.front());
    while (!frontier.empty()) {
      int t = frontier.front();
      frontier.pop();
      std::vector<int> nbrs = td.tree[t].children;
      if (td.tree[t].parent >= 0) nbrs.push_back(td.tree[t].parent);
      for (int nbr : nbrs) {
        if (in_region.count(nbr) && !visited.count(nbr)) {
          visited.insert(nbr);
          frontier.push(nbr);
        }
      }
    }
    if (visited.size() != in_region.size()) {
      violations.push_back("region of node " + std::to_string(v) +
                           " is disconnected (condition 3)");
    }
  }
  return violations;
}

bool verify_irredundant(const TreeDecomposition& td, const Hypergraph& h) {
  for (NodeId v = 0; v < h.node_count(); ++v) {
    auto region = td.region_of(v);
    std::set<int> in_region(region.begin(), region.end());
    for (int t : region) {
      std::vector<int> nbrs = td.tree[t].children;
      if (td.tree[t].parent >= 0) nbrs.push_back(td.tree[t].parent);
      int induced_degree = 0;
      for (int nbr : nbrs) induced_degree += in_region.count(nbr);
      bool leaf = induced_degree <= 1;
      bool bears = false;
      for (HyperedgeId e : td.tree[t].hyperedges) {
        const auto& members = h.hyperedge(e).members;
        if (std::find(members.begin(), members.end(), v) != members.end()) {
          bears = true;
          break;
        }
      }
      if (bears != leaf) return false;
    }
  }
  return true;
}

}  // namespace mhg
