#include "mhg/serialize.hpp"

#include <fstream>

#include <json.hpp>

#include "mhg/errors.hpp"

namespace mhg {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json bond_to_json(const BondLabel& b) {
  json j;
  j["order"] = b.order;
  j["ez"] = b.ez == EzConfig::None ? "none" : (b.ez == EzConfig::E ? "E" : "Z");
  return j;
}

BondLabel bond_from_json(const json& j) {
  BondLabel b;
  b.order = j.at("order").get<int>();
  std::string ez = j.at("ez").get<std::string>();
  if (ez == "none") b.ez = EzConfig::None;
  else if (ez == "E") b.ez = EzConfig::E;
  else if (ez == "Z") b.ez = EzConfig::Z;
  else throw IoError("bad ez tag '" + ez + "'");
  return b;
}

json atom_to_json(const AtomLabel& a) {
  json j;
  j["element"] = element_symbol(a.element);
  j["charge"] = a.charge;
  j["h"] = a.implicit_h;
  j["valence"] = a.valence;
  j["chirality"] = a.chirality == Chirality::None
                       ? "none"
                       : (a.chirality == Chirality::CCW ? "ccw" : "cw");
  return j;
}

AtomLabel atom_from_json(const json& j) {
  AtomLabel a;
  auto element = element_from_symbol(j.at("element").get<std::string>());
  if (!element) throw IoError("bad element in grammar file");
  a.element = *element;
  a.charge = j.at("charge").get<int>();
  a.implicit_h = j.at("h").get<int>();
  a.valence = j.at("valence").get<int>();
  std::string chirality = j.at("chirality").get<std::string>();
  if (chirality == "none") a.chirality = Chirality::None;
  else if (chirality == "ccw") a.chirality = Chirality::CCW;
  else if (chirality == "cw") a.chirality = Chirality::CW;
  else throw IoError("bad chirality tag '" + chirality + "'");
  return a;
}

json label_to_json(const HyperedgeLabel& label) {
  json j;
  switch (label.kind) {
    case HyperedgeLabel::Kind::Start:
      j["kind"] = "start";
      break;
    case HyperedgeLabel::Kind::Terminal:
      j["kind"] = "terminal";
      j["atom"] = atom_to_json(label.atom);
      break;
    case HyperedgeLabel::Kind::NonTerminal: {
      j["kind"] = "nonterminal";
      json labels = json::array();
      for (const BondLabel& b : label.node_labels) {
        labels.push_back(bond_to_json(b));
      }
      j["node_labels"] = std::move(labels);
      break;
    }
  }
  return j;
}

HyperedgeLabel label_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "start") return HyperedgeLabel::start();
  if (kind == "terminal") {
    return HyperedgeLabel::terminal(atom_from_json(j.at("atom")));
  }
  if (kind == "nonterminal") {
    std::vector<BondLabel> labels;
    for (const json& b : j.at("node_labels")) {
      labels.push_back(bond_from_json(b));
    }
    return HyperedgeLabel::nonterminal(std::move(labels));
  }
  throw IoError("bad hyperedge label kind '" + kind + "'");
}

json rule_to_json(const ProductionRule& rule, const std::string& key) {
  json j;
  j["lhs"] = label_to_json(rule.lhs);
  json nodes = json::array();
  for (const BondLabel& b : rule.rhs.node_labels()) {
    nodes.push_back(bond_to_json(b));
  }
  j["nodes"] = std::move(nodes);
  json hyperedges = json::array();
  for (HyperedgeId e = 0; e < rule.rhs.hyperedge_count(); ++e) {
    const Hyperedge& he = rule.rhs.hyperedge(e);
    json edge;
    edge["label"] = label_to_json(he.label);
    edge["members"] = he.members;
    hyperedges.push_back(std::move(edge));
  }
  j["hyperedges"] = std::move(hyperedges);
  j["external"] = rule.external;
  j["nonterminals"] = rule.nonterminals;
  j["key"] = key;
  return j;
}

}  // namespace

std::string grammar_to_json(const Mhg& mhg) {
  json j;
  j["format_version"] = kFormatVersion;
  json rules = json::array();
  for (int id = 0; id < mhg.rule_count(); ++id) {
    rules.push_back(rule_to_json(mhg.rule(id), mhg.key_of(id)));
  }
  j["rules"] = std::move(rules);
  j["start_rules"] = mhg.start_rules();
  return j.dump(2);
}

Mhg grammar_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("grammar file is not valid JSON: ") + e.what());
  }
  if (j.value("format_version", -1) != kFormatVersion) {
    throw IoError("unsupported grammar file format version");
  }
  Mhg mhg;
  try {
    for (const json& rj : j.at("rules")) {
      ProductionRule rule;
      rule.lhs = label_from_json(rj.at("lhs"));
      for (const json& b : rj.at("nodes")) {
        rule.rhs.add_node(bond_from_json(b));
      }
      for (const json& edge : rj.at("hyperedges")) {
        rule.rhs.add_hyperedge(label_from_json(edge.at("label")),
                               edge.at("members").get<std::vector<NodeId>>());
      }
      rule.external = rj.at("external").get<std::vector<NodeId>>();
      rule.nonterminals =
          rj.at("nonterminals").get<std::vector<HyperedgeId>>();

      CanonicalRule canon = canonicalize(rule);
      std::string stored_key = rj.at("key").get<std::string>();
      if (canon.key != stored_key) {
        throw IoError("grammar file key mismatch; file corrupt or edited");
      }
      mhg.add_rule(canon);
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("grammar file structure error: ") + e.what());
  }
  return mhg;
}

void save_grammar(const Mhg& mhg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << grammar_to_json(mhg) << "\n";
  if (!out) throw IoError("write failure on '" + path + "'");
}

Mhg load_grammar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return grammar_from_json(text);
}

void save_sequences(const std::vector<ParseSequence>& sequences,
                    const std::vector<std::string>& smiles,
                    const std::string& path) {
  json j;
  j["format_version"] = kFormatVersion;
  j["sequences"] = sequences;
  j["smiles"] = smiles;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failure on '" + path + "'");
}

std::pair<std::vector<ParseSequence>, std::vector<std::string>> load_sequences(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
    if (j.value("format_version", -1) != kFormatVersion) {
      throw IoError("unsupported sequence file format version");
    }
    return {j.at("sequences").get<std::vector<ParseSequence>>(),
            j.value("smiles", std::vector<std::string>{})};
  } catch (const json::exception& e) {
    throw IoError(std::string("sequence file error: ") + e.what());
  }
}

}  // namespace mhg
