#include "mhg/hypergraph.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "mhg/errors.hpp"

namespace mhg {

std::string hyperedge_label_to_string(const HyperedgeLabel& label) {
  switch (label.kind) {
    case HyperedgeLabel::Kind::Start:
      return "S";
    case HyperedgeLabel::Kind::Terminal:
      return atom_label_to_string(label.atom);
    case HyperedgeLabel::Kind::NonTerminal: {
      std::ostringstream out;
      out << "NT" << label.rank() << "(";
      for (std::size_t i = 0; i < label.node_labels.size(); ++i) {
        if (i) out << ",";
        out << bond_label_to_string(label.node_labels[i]);
      }
      out << ")";
      return out.str();
    }
  }
  return "?";
}

NodeId Hypergraph::add_node(const BondLabel& label) {
  node_labels_.push_back(label);
  return static_cast<NodeId>(node_labels_.size() - 1);
}

HyperedgeId Hypergraph::add_hyperedge(const HyperedgeLabel& label,
                                      std::vector<NodeId> members) {
  hyperedges_.push_back(Hyperedge{label, std::move(members)});
  return static_cast<HyperedgeId>(hyperedges_.size() - 1);
}

std::vector<HyperedgeId> Hypergraph::incident_hyperedges(NodeId id) const {
  std::vector<HyperedgeId> result;
  for (HyperedgeId e = 0; e < hyperedge_count(); ++e) {
    const auto& members = hyperedges_[e].members;
    if (std::find(members.begin(), members.end(), id) != members.end()) {
      result.push_back(e);
    }
  }
  return result;
}

int Hypergraph::degree(NodeId id) const {
  int count = 0;
  for (const auto& he : hyperedges_) {
    count += static_cast<int>(
        std::count(he.members.begin(), he.members.end(), id));
  }
  return count;
}

std::vector<HypergraphViolation> check_molecular_hypergraph(
    const Hypergraph& h) {
  std::vector<HypergraphViolation> violations;
  auto report = [&](const std::string& msg) {
    violations.push_back(HypergraphViolation{msg});
  };

  std::vector<int> degree(h.node_count(), 0);
  for (HyperedgeId e = 0; e < h.hyperedge_count(); ++e) {
    const Hyperedge& he = h.hyperedge(e);
    if (he.members.empty()) {
      report("hyperedge " + std::to_string(e) + " is empty");
      continue;
    }
    std::set<NodeId> unique;
    for (NodeId m : he.members) {
      if (m < 0 || m >= h.node_count()) {
        report("hyperedge " + std::to_string(e) + " has an out-of-range member");
        continue;
      }
      if (!unique.insert(m).second) {
        report("hyperedge " + std::to_string(e) + " lists node " +
               std::to_string(m) + " twice");
      }
      ++degree[m];
    }
    if (he.label.kind != HyperedgeLabel::Kind::Terminal) {
      report("hyperedge " + std::to_string(e) + " is not terminal (" +
             hyperedge_label_to_string(he.label) + ")");
      continue;
    }
    int weighted = 0;
    for (NodeId m : he.members) {
      if (m >= 0 && m < h.node_count()) weighted += h.node_label(m).order;
    }
    int expected = heavy_degree_target(he.label.atom);
    if (weighted != expected) {
      report("hyperedge " + std::to_string(e) + " (" +
             atom_label_to_string(he.label.atom) + ") has weighted size " +
             std::to_string(weighted) + ", expected " +
             std::to_string(expected));
    }
  }
  for (NodeId v = 0; v < h.node_count(); ++v) {
    if (degree[v] != 2) {
      report("node " + std::to_string(v) + " has degree " +
             std::to_string(degree[v]) + ", expected 2");
    }
  }
  return violations;
}

Hypergraph enc_h(const MolecularGraph& g) {
  if (g.bond_count() == 0) {
    throw EmptyBondSet("molecule has no bonds; single atoms are not encodable");
  }
  auto violations = check_molecular_graph(g);
  if (!violations.empty()) {
    throw ValenceError("input graph fails the degree condition: " +
                       violations.front().message);
  }
  Hypergraph h;
  for (const Bond& bond : g.bonds()) h.add_node(bond.label);
  for (NodeId a = 0; a < g.atom_count(); ++a) {
    std::vector<NodeId> members;
    members.reserve(g.incident(a).size());
    for (const auto& inc : g.incident(a)) members.push_back(inc.bond);
    h.add_hyperedge(HyperedgeLabel::terminal(g.atom(a)), std::move(members));
  }
  return h;
}

MolecularGraph dec_h(const Hypergraph& h) {
  auto violations = check_molecular_hypergraph(h);
  for (const auto& v : violations) {
    if (v.message.find("degree") != std::string::npos ||
        v.message.find("twice") != std::string::npos) {
      throw NotTwoRegular(v.message);
    }
  }
  if (!violations.empty()) {
    throw CardinalityMismatch(violations.front().message);
  }

  MolecularGraph g;
  for (HyperedgeId e = 0; e < h.hyperedge_count(); ++e) {
    g.add_atom(h.hyperedge(e).label.atom);
  }
  // Each node is shared by exactly two hyperedges; that pair becomes a bond.
  std::vector<std::pair<HyperedgeId, HyperedgeId>> endpoints(
      h.node_count(), {-1, -1});
  for (HyperedgeId e = 0; e < h.hyperedge_count(); ++e) {
    for (NodeId m : h.hyperedge(e).members) {
      if (endpoints[m].first < 0) {
        endpoints[m].first = e;
      } else {
        endpoints[m].second = e;
      }
    }
  }
  for (NodeId v = 0; v < h.node_count(); ++v) {
    auto [a, b] = endpoints[v];
    try {
      g.add_bond(a, b, h.node_label(v));
    } catch (const Error& e) {
      throw CardinalityMismatch(
          "node " + std::to_string(v) +
          " does not decode to a simple bond: " + e.what());
    }
  }
  return g;
}

}  // namespace mhg
