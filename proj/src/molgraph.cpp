#include "mhg/molgraph.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdlib>
#include <map>
#include <queue>
#include <sstream>

#include "mhg/errors.hpp"

namespace mhg {

namespace {

struct ValenceEntry {
  Element element;
  int charge;
  std::array<int, 3> valences;
  int count;
};

// Covers ZINC-like organic molecules. S and P list their admissible valences
// ascending.
constexpr ValenceEntry kValenceTable[] = {
    {Element::H, 0, {1, 0, 0}, 1},   {Element::B, 0, {3, 0, 0}, 1},
    {Element::B, -1, {4, 0, 0}, 1},  {Element::C, 0, {4, 0, 0}, 1},
    {Element::C, 1, {3, 0, 0}, 1},   {Element::C, -1, {3, 0, 0}, 1},
    {Element::N, 0, {3, 0, 0}, 1},   {Element::N, 1, {4, 0, 0}, 1},
    {Element::N, -1, {2, 0, 0}, 1},  {Element::O, 0, {2, 0, 0}, 1},
    {Element::O, 1, {3, 0, 0}, 1},   {Element::O, -1, {1, 0, 0}, 1},
    {Element::F, 0, {1, 0, 0}, 1},   {Element::P, 0, {3, 5, 0}, 2},
    {Element::P, 1, {4, 0, 0}, 1},   {Element::S, 0, {2, 4, 6}, 3},
    {Element::S, 1, {3, 5, 0}, 2},   {Element::S, -1, {1, 0, 0}, 1},
    {Element::Cl, 0, {1, 0, 0}, 1},  {Element::Br, 0, {1, 0, 0}, 1},
    {Element::I, 0, {1, 0, 0}, 1},
};

const ValenceEntry* find_entry(Element element, int charge) {
  for (const auto& entry : kValenceTable) {
    if (entry.element == element && entry.charge == charge) return &entry;
  }
  return nullptr;
}

}  // namespace

const char* element_symbol(Element e) {
  switch (e) {
    case Element::B: return "B";
    case Element::C: return "C";
    case Element::N: return "N";
    case Element::O: return "O";
    case Element::F: return "F";
    case Element::P: return "P";
    case Element::S: return "S";
    case Element::Cl: return "Cl";
    case Element::Br: return "Br";
    case Element::I: return "I";
    case Element::H: return "H";
  }
  return "?";
}

std::optional<Element> element_from_symbol(const std::string& symbol) {
  static const std::map<std::string, Element> table = {
      {"B", Element::B},   {"C", Element::C},  {"N", Element::N},
      {"O", Element::O},   {"F", Element::F},  {"P", Element::P},
      {"S", Element::S},   {"Cl", Element::Cl}, {"Br", Element::Br},
      {"I", Element::I},   {"H", Element::H},
  };
  auto it = table.find(symbol);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::span<const int> ValenceTable::valences(Element element, int charge) {
  const ValenceEntry* entry = find_entry(element, charge);
  if (entry == nullptr) return {};
  return {entry->valences.data(), static_cast<std::size_t>(entry->count)};
}

std::optional<int> ValenceTable::resolve_at_least(Element element, int charge,
                                                  int min_total) {
  for (int v : valences(element, charge)) {
    if (v >= min_total) return v;
  }
  return std::nullopt;
}

bool ValenceTable::admits_exact(Element element, int charge, int total) {
  auto vs = valences(element, charge);
  return std::find(vs.begin(), vs.end(), total) != vs.end();
}

AtomLabel make_atom_label(Element element, int charge, int implicit_h,
                          Chirality chirality) {
  auto vs = ValenceTable::valences(element, charge);
  if (vs.empty()) {
    throw UnknownElement(std::string("unsupported element/charge: ") +
                         element_symbol(element) + " charge " +
                         std::to_string(charge));
  }
  auto valence = ValenceTable::resolve_at_least(element, charge, implicit_h);
  if (!valence) {
    throw ValenceError(std::string("implicit hydrogen count ") +
                       std::to_string(implicit_h) + " exceeds valence of " +
                       element_symbol(element));
  }
  return AtomLabel{element, charge, implicit_h, *valence, chirality};
}

int heavy_degree_target(const AtomLabel& label) {
  if (ValenceTable::valences(label.element, label.charge).empty()) {
    throw UnknownElement(std::string("unsupported element/charge: ") +
                         element_symbol(label.element));
  }
  return label.valence - label.implicit_h;
}

std::string atom_label_to_string(const AtomLabel& label) {
  std::ostringstream out;
  out << element_symbol(label.element);
  if (label.charge != 0) {
    out << (label.charge > 0 ? '+' : '-');
    if (std::abs(label.charge) > 1) out << std::abs(label.charge);
  }
  out << "H" << label.implicit_h << "v" << label.valence;
  switch (label.chirality) {
    case Chirality::None: break;
    case Chirality::CCW: out << "@"; break;
    case Chirality::CW: out << "@@"; break;
  }
  return out.str();
}

std::string bond_label_to_string(const BondLabel& label) {
  std::string s(1, static_cast<char>('0' + label.order));
  switch (label.ez) {
    case EzConfig::None: break;
    case EzConfig::E: s += 'E'; break;
    case EzConfig::Z: s += 'Z'; break;
  }
  return s;
}

NodeId MolecularGraph::add_atom(const AtomLabel& label) {
  atoms_.push_back(label);
  adjacency_.emplace_back();
  return static_cast<NodeId>(atoms_.size() - 1);
}

BondId MolecularGraph::add_bond(NodeId u, NodeId v, const BondLabel& label) {
  if (u == v) throw Error("self-loop bond");
  if (u < 0 || v < 0 || u >= atom_count() || v >= atom_count()) {
    throw Error("bond endpoint out of range");
  }
  if (find_bond(u, v)) throw Error("parallel bond");
  bonds_.push_back(Bond{u, v, label});
  BondId id = static_cast<BondId>(bonds_.size() - 1);
  adjacency_[u].push_back(Incidence{v, id});
  adjacency_[v].push_back(Incidence{u, id});
  return id;
}

int MolecularGraph::weighted_degree(NodeId id) const {
  int total = 0;
  for (const auto& inc : adjacency_[id]) total += bonds_[inc.bond].label.order;
  return total;
}

std::optional<BondId> MolecularGraph::find_bond(NodeId u, NodeId v) const {
  for (const auto& inc : adjacency_[u]) {
    if (inc.neighbor == v) return inc.bond;
  }
  return std::nullopt;
}

std::vector<DegreeViolation> check_molecular_graph(const MolecularGraph& g) {
  std::vector<DegreeViolation> violations;
  for (NodeId v = 0; v < g.atom_count(); ++v) {
    const AtomLabel& label = g.atom(v);
    int expected;
    try {
      expected = heavy_degree_target(label);
    } catch (const Error& e) {
      violations.push_back({v, 0, 0, e.what()});
      continue;
    }
    int actual = g.weighted_degree(v);
    if (actual != expected) {
      std::ostringstream msg;
      msg << "atom " << v << " (" << atom_label_to_string(label) << ") has "
          << "weighted degree " << actual << ", expected " << expected
          << (actual > expected ? " (excess)" : " (deficit)");
      violations.push_back({v, expected, actual, msg.str()});
    }
  }
  return violations;
}

namespace {

// Backtracking matcher. Nodes of g1 are matched in an order that keeps each
// new node adjacent to an already-matched one whenever possible, so the
// candidate set stays narrow.
class IsoMatcher {
 public:
  IsoMatcher(const MolecularGraph& g1, const MolecularGraph& g2)
      : g1_(g1), g2_(g2) {}

  bool run() {
    const int n = g1_.atom_count();
    if (n != g2_.atom_count() || g1_.bond_count() != g2_.bond_count()) {
      return false;
    }
    if (sorted_labels(g1_) != sorted_labels(g2_)) return false;

    order_ = match_order();
    map_.assign(n, -1);
    used_.assign(n, false);
    return extend(0);
  }

 private:
  static std::vector<AtomLabel> sorted_labels(const MolecularGraph& g) {
    std::vector<AtomLabel> labels = g.atoms();
    std::sort(labels.begin(), labels.end());
    return labels;
  }

  std::vector<NodeId> match_order() const {
    const int n = g1_.atom_count();
    std::vector<NodeId> order;
    std::vector<bool> seen(n, false);
    for (NodeId start = 0; start < n; ++start) {
      if (seen[start]) continue;
      std::queue<NodeId> frontier;
      frontier.push(start);
      seen[start] = true;
      while (!frontier.empty()) {
        NodeId v = frontier.front();
        frontier.pop();
        order.push_back(v);
        for (const auto& inc : g1_.incident(v)) {
          if (!seen[inc.neighbor]) {
            seen[inc.neighbor] = true;
            frontier.push(inc.neighbor);
          }
        }
      }
    }
    return order;
  }

  bool feasible(NodeId v1, NodeId v2) const {
    if (g1_.atom(v1) != g2_.atom(v2)) return false;
    if (g1_.incident(v1).size() != g2_.incident(v2).size()) return false;
    // Every matched neighbor of v1 must map to a neighbor of v2 with the same
    // bond label, and vice versa for matched neighbors of v2.
    for (const auto& inc : g1_.incident(v1)) {
      NodeId mapped = map_[inc.neighbor];
      if (mapped < 0) continue;
      auto bond = g2_.find_bond(v2, mapped);
      if (!bond || g2_.bond(*bond).label != g1_.bond(inc.bond).label) {
        return false;
      }
    }
    for (const auto& inc : g2_.incident(v2)) {
      if (!used_[inc.neighbor]) continue;
      // Find the g1 preimage of inc.neighbor and check the edge exists there.
      NodeId pre = -1;
      for (NodeId w = 0; w < g1_.atom_count(); ++w) {
        if (map_[w] == inc.neighbor) {
          pre = w;
          break;
        }
      }
      if (pre >= 0 && !g1_.find_bond(v1, pre)) return false;
    }
    return true;
  }

  bool extend(std::size_t depth) {
    if (depth == order_.size()) return true;
    NodeId v1 = order_[depth];
    for (NodeId v2 = 0; v2 < g2_.atom_count(); ++v2) {
      if (used_[v2] || !feasible(v1, v2)) continue;
      map_[v1] = v2;
      used_[v2] = true;
      if (extend(depth + 1)) return true;
      map_[v1] = -1;
      used_[v2] = false;
    }
    return false;
  }

  const MolecularGraph& g1_;
  const MolecularGraph& g2_;
  std::vector<NodeId> order_;
  std::vector<NodeId> map_;
  std::vector<bool> used_;
};

using EdgeSet = std::vector<std::uint64_t>;

EdgeSet make_edge_set(int bond_count) {
  return EdgeSet((bond_count + 63) / 64, 0);
}

void flip_edge(EdgeSet& s, int bond) { s[bond / 64] ^= 1ULL << (bond % 64); }

bool edge_in(const EdgeSet& s, int bond) {
  return (s[bond / 64] >> (bond % 64)) & 1ULL;
}

void xor_into(EdgeSet& dst, const EdgeSet& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

bool is_zero(const EdgeSet& s) {
  return std::all_of(s.begin(), s.end(), [](std::uint64_t w) { return w == 0; });
}

int lowest_set(const EdgeSet& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != 0) {
      return static_cast<int>(i * 64 + std::countr_zero(s[i]));
    }
  }
  return -1;
}

}  // namespace

bool isomorphic(const MolecularGraph& g1, const MolecularGraph& g2) {
  return IsoMatcher(g1, g2).run();
}

// Horton-style minimum cycle basis: candidate cycles are shortest-path cycles
// through every (vertex, edge) pair; a greedy pass keeps the shortest
// GF(2)-independent ones until the cycle space dimension is reached.
std::vector<int> ring_sizes(const MolecularGraph& g) {
  const int n = g.atom_count();
  const int m = g.bond_count();
  if (m == 0 || n == 0) return {};

  // Connected component count for the cycle space dimension.
  int components = 0;
  {
    std::vector<bool> seen(n, false);
    for (NodeId s = 0; s < n; ++s) {
      if (seen[s]) continue;
      ++components;
      std::queue<NodeId> q;
      q.push(s);
      seen[s] = true;
      while (!q.empty()) {
        NodeId v = q.front();
        q.pop();
        for (const auto& inc : g.incident(v)) {
          if (!seen[inc.neighbor]) {
            seen[inc.neighbor] = true;
            q.push(inc.neighbor);
          }
        }
      }
    }
  }
  const int dim = m - n + components;
  if (dim <= 0) return {};

  struct Candidate {
    int length;
    EdgeSet edges;
  };
  std::vector<Candidate> candidates;

  std::vector<int> dist(n);
  std::vector<NodeId> parent(n);
  std::vector<BondId> parent_bond(n);
  for (NodeId root = 0; root < n; ++root) {
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<NodeId> q;
    q.push(root);
    dist[root] = 0;
    parent[root] = -1;
    while (!q.empty()) {
      NodeId v = q.front();
      q.pop();
      for (const auto& inc : g.incident(v)) {
        if (dist[inc.neighbor] < 0) {
          dist[inc.neighbor] = dist[v] + 1;
          parent[inc.neighbor] = v;
          parent_bond[inc.neighbor] = inc.bond;
          q.push(inc.neighbor);
        }
      }
    }
    auto path_edges = [&](NodeId v, EdgeSet& set, std::vector<bool>& on_path) {
      while (v != root) {
        flip_edge(set, parent_bond[v]);
        on_path[v] = true;
        v = parent[v];
      }
    };
    for (BondId b = 0; b < m; ++b) {
      const Bond& bond = g.bond(b);
      if (dist[bond.u] < 0 || dist[bond.v] < 0) continue;
      if (parent_bond[bond.u] == b || parent_bond[bond.v] == b) continue;
      // Candidate cycle: SP(root,u) + SP(root,v) + (u,v). Only keep it when
      // the two paths are vertex-disjoint apart from the root, which is what
      // makes it a simple cycle.
      std::vector<bool> on_u(n, false), on_v(n, false);
      EdgeSet set = make_edge_set(m);
      path_edges(bond.u, set, on_u);
      path_edges(bond.v, set, on_v);
      bool disjoint = true;
      for (NodeId x = 0; x < n && disjoint; ++x) {
        if (x != root && on_u[x] && on_v[x]) disjoint = false;
      }
      if (!disjoint) continue;
      flip_edge(set, b);
      candidates.push_back({dist[bond.u] + dist[bond.v] + 1, std::move(set)});
    }
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.length < b.length;
                   });

  // Greedy GF(2) independence with pivot elimination.
  std::vector<EdgeSet> basis;      // reduced rows
  std::vector<int> pivots;
  std::vector<int> result;
  for (const auto& cand : candidates) {
    if (static_cast<int>(result.size()) == dim) break;
    EdgeSet reduced = cand.edges;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (edge_in(reduced, pivots[i])) xor_into(reduced, basis[i]);
    }
    if (is_zero(reduced)) continue;
    pivots.push_back(lowest_set(reduced));
    basis.push_back(std::move(reduced));
    result.push_back(cand.length);
  }

  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace mhg
