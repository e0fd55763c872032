#include "mhg/smiles.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "mhg/errors.hpp"

namespace mhg {

namespace {

bool is_aromatic_organic(char c) {
  return c == 'b' || c == 'c' || c == 'n' || c == 'o' || c == 'p' || c == 's';
}

// One directional ('/' or '\') single bond as written. `from` is the atom at
// whose position the symbol appeared.
struct DirectionalBond {
  BondId bond;
  NodeId from;
  NodeId to;
  bool slash;  // true '/', false '\'
};

// Substituent `x` is above (true) or below (false) the double-bond axis,
// judged from anchor atom `a`.
bool substituent_up(const DirectionalBond& d, NodeId anchor) {
  bool anchor_written_first = (d.from == anchor);
  return anchor_written_first ? d.slash : !d.slash;
}

struct PendingBond {
  int order = 0;         // 0 = unspecified (defaults to single)
  int slash = 0;         // 0 none, +1 '/', -1 '\'
};

struct AtomDraft {
  Element element = Element::C;
  int charge = 0;
  bool bracket = false;
  int bracket_h = 0;
  Chirality chirality = Chirality::None;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  MolecularGraph run() {
    if (text_.empty()) throw SyntaxError("empty SMILES string");
    parse_chain();
    if (pos_ != text_.size()) {
      throw SyntaxError("unexpected character '" + std::string(1, text_[pos_]) +
                        "' at position " + std::to_string(pos_));
    }
    if (!stack_.empty()) throw SyntaxError("unmatched '('");
    if (pending_.order != 0 || pending_.slash != 0) {
      throw SyntaxError("dangling bond symbol at end of string");
    }
    if (!ring_open_.empty()) {
      throw UnclosedRing("ring bond " + std::to_string(ring_open_.begin()->first) +
                         " left open");
    }
    if (drafts_.empty()) throw SyntaxError("no atoms in SMILES string");
    finish_hydrogens();
    assign_ez_tags();
    return std::move(graph_);
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw SyntaxError(message + " at position " + std::to_string(pos_));
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char take() { return text_[pos_++]; }
  bool done() const { return pos_ >= text_.size(); }

  void parse_chain() {
    while (!done()) {
      char c = peek();
      if (c == '(') {
        ++pos_;
        if (prev_ < 0) fail("branch before any atom");
        stack_.push_back(prev_);
        continue;
      }
      if (c == ')') {
        ++pos_;
        if (stack_.empty()) fail("unmatched ')'");
        if (pending_.order != 0 || pending_.slash != 0) {
          fail("dangling bond symbol before ')'");
        }
        prev_ = stack_.back();
        stack_.pop_back();
        continue;
      }
      if (c == '-' || c == '=' || c == '#' || c == '/' || c == '\\') {
        ++pos_;
        if (pending_.order != 0 || pending_.slash != 0) fail("two bond symbols in a row");
        if (c == '=') pending_.order = 2;
        else if (c == '#') pending_.order = 3;
        else pending_.order = 1;
        if (c == '/') pending_.slash = 1;
        if (c == '\\') pending_.slash = -1;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        parse_ring_closure();
        continue;
      }
      if (c == '[') {
        parse_bracket_atom();
        continue;
      }
      if (c == '.') {
        fail("disconnected components ('.') are not supported");
      }
      if (std::isupper(static_cast<unsigned char>(c))) {
        parse_organic_atom();
        continue;
      }
      if (is_aromatic_organic(c)) {
        throw AromaticNotSupported(
            "aromatic atom '" + std::string(1, c) +
            "' not supported; use the Kekule form");
      }
      fail("unexpected character '" + std::string(1, c) + "'");
    }
  }

  void parse_organic_atom() {
    char c = take();
    std::string symbol(1, c);
    if ((c == 'C' && peek() == 'l') || (c == 'B' && peek() == 'r')) {
      symbol += take();
    }
    auto element = element_from_symbol(symbol);
    if (!element || *element == Element::H) {
      fail("'" + symbol + "' is not an organic-subset atom");
    }
    AtomDraft draft;
    draft.element = *element;
    add_atom(draft);
  }

  void parse_bracket_atom() {
    ++pos_;  // '['
    if (done()) fail("unterminated bracket atom");
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      throw UnsupportedFeature("isotope specifications are not supported");
    }
    char c = peek();
    if (is_aromatic_organic(c) || std::islower(static_cast<unsigned char>(c))) {
      throw AromaticNotSupported("aromatic atom '" + std::string(1, c) +
                                 "' not supported; use the Kekule form");
    }
    if (!std::isupper(static_cast<unsigned char>(c))) fail("expected element symbol");
    std::string symbol(1, take());
    if (!done() && std::islower(static_cast<unsigned char>(peek()))) {
      // Two-letter symbol; only consume when it forms a known element.
      if (element_from_symbol(symbol + peek())) symbol += take();
    }
    auto element = element_from_symbol(symbol);
    if (!element) fail("unknown element '" + symbol + "'");

    AtomDraft draft;
    draft.element = *element;
    draft.bracket = true;

    if (peek() == '@') {
      ++pos_;
      if (peek() == '@') {
        ++pos_;
        draft.chirality = Chirality::CW;
      } else {
        draft.chirality = Chirality::CCW;
      }
    }
    if (peek() == 'H') {
      ++pos_;
      draft.bracket_h = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        draft.bracket_h = take() - '0';
      }
    }
    if (peek() == '+' || peek() == '-') {
      int sign = take() == '+' ? 1 : -1;
      int magnitude = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        magnitude = take() - '0';
      } else {
        while (peek() == (sign > 0 ? '+' : '-')) {
          ++pos_;
          ++magnitude;
        }
      }
      draft.charge = sign * magnitude;
    }
    if (peek() == ':') throw UnsupportedFeature("atom classes are not supported");
    if (peek() != ']') fail("expected ']'");
    ++pos_;
    add_atom(draft);
  }

  void parse_ring_closure() {
    int number;
    if (peek() == '%') {
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected digits after '%'");
      number = take() - '0';
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("'%' needs two digits");
      number = number * 10 + (take() - '0');
    } else {
      number = take() - '0';
    }
    if (prev_ < 0) fail("ring closure before any atom");

    auto it = ring_open_.find(number);
    if (it == ring_open_.end()) {
      ring_open_[number] = {prev_, pending_};
      pending_ = {};
      return;
    }
    auto [open_atom, open_bond] = it->second;
    ring_open_.erase(it);
    // Bond order may be given at either end but must not conflict.
    int order = 1;
    if (open_bond.order != 0 && pending_.order != 0 &&
        open_bond.order != pending_.order) {
      fail("conflicting ring bond orders");
    }
    if (open_bond.order != 0) order = open_bond.order;
    if (pending_.order != 0) order = pending_.order;
    BondId bond = add_bond_checked(open_atom, prev_, order);
    if (open_bond.slash != 0) {
      directional_.push_back(
          {bond, open_atom, prev_, open_bond.slash > 0});
    }
    if (pending_.slash != 0) {
      directional_.push_back({bond, prev_, open_atom, pending_.slash > 0});
    }
    pending_ = {};
  }

  void add_atom(const AtomDraft& draft) {
    NodeId id = graph_.add_atom(AtomLabel{draft.element, draft.charge, 0, 1,
                                          draft.chirality});
    drafts_.push_back(draft);
    if (prev_ >= 0) {
      int order = pending_.order == 0 ? 1 : pending_.order;
      BondId bond = add_bond_checked(prev_, id, order);
      if (pending_.slash != 0) {
        directional_.push_back({bond, prev_, id, pending_.slash > 0});
      }
    } else if (pending_.order != 0 || pending_.slash != 0) {
      fail("bond symbol before first atom");
    }
    pending_ = {};
    prev_ = id;
  }

  BondId add_bond_checked(NodeId u, NodeId v, int order) {
    try {
      return graph_.add_bond(u, v, BondLabel{order, EzConfig::None});
    } catch (const Error& e) {
      throw SyntaxError(std::string(e.what()) + " in ring/bond structure");
    }
  }

  // Resolve valences and implicit hydrogen counts once all bonds are known.
  void finish_hydrogens() {
    for (NodeId v = 0; v < graph_.atom_count(); ++v) {
      const AtomDraft& draft = drafts_[v];
      int bond_sum = graph_.weighted_degree(v);
      AtomLabel& label = graph_.atom(v);
      if (draft.bracket) {
        int total = bond_sum + draft.bracket_h;
        if (!ValenceTable::admits_exact(draft.element, draft.charge, total)) {
          throw ValenceError(
              std::string("bracket atom ") + element_symbol(draft.element) +
              " with charge " + std::to_string(draft.charge) + ", " +
              std::to_string(draft.bracket_h) + "H and bond order sum " +
              std::to_string(bond_sum) + " matches no admissible valence");
        }
        label.implicit_h = draft.bracket_h;
        label.valence = total;
      } else {
        auto valence =
            ValenceTable::resolve_at_least(draft.element, 0, bond_sum);
        if (!valence) {
          throw ValenceError(std::string("bond order sum ") +
                             std::to_string(bond_sum) + " exceeds valence of " +
                             element_symbol(draft.element));
        }
        label.valence = *valence;
        label.implicit_h = *valence - bond_sum;
      }
    }
  }

  // Turn '/'+'\' annotations around double bonds into E/Z tags.
  void assign_ez_tags() {
    for (BondId b = 0; b < graph_.bond_count(); ++b) {
      const Bond& bond = graph_.bond(b);
      if (bond.label.order != 2) continue;
      auto side_up = [&](NodeId anchor, NodeId other) -> std::optional<bool> {
        std::optional<bool> up;
        for (const auto& d : directional_) {
          NodeId sub = (d.from == anchor) ? d.to : (d.to == anchor ? d.from : -1);
          if (sub < 0 || sub == other) continue;
          bool value = substituent_up(d, anchor);
          if (up && *up == value) {
            throw SyntaxError("conflicting bond directions around double bond");
          }
          if (!up) up = value;
        }
        return up;
      };
      auto up_u = side_up(bond.u, bond.v);
      auto up_v = side_up(bond.v, bond.u);
      if (up_u && up_v) {
        graph_.bond(b).label.ez = (*up_u == *up_v) ? EzConfig::Z : EzConfig::E;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  MolecularGraph graph_;
  std::vector<AtomDraft> drafts_;
  NodeId prev_ = -1;
  PendingBond pending_;
  std::vector<NodeId> stack_;
  std::map<int, std::pair<NodeId, PendingBond>> ring_open_;
  std::vector<DirectionalBond> directional_;
};

}  // namespace

MolecularGraph parse_smiles(const std::string& text) {
  return Parser(text).run();
}

namespace {

// Where a bond token appears in the output stream.
struct BondEmission {
  NodeId from = -1;  // atom at whose position the symbol is written
  NodeId to = -1;
  int sequence = -1;
  int direction = 0;  // 0 undirected, +1 '/', -1 '\'
};

class Writer {
 public:
  explicit Writer(const MolecularGraph& g) : g_(g) {}

  std::string run() {
    if (g_.atom_count() == 0) throw UnsupportedFeature("empty graph");
    for (const Bond& bond : g_.bonds()) {
      if (bond.label.ez != EzConfig::None && bond.label.order != 2) {
        throw UnsupportedFeature("E/Z tag on a non-double bond");
      }
    }
    plan_tree();
    if (static_cast<int>(visit_order_.size()) != g_.atom_count()) {
      throw UnsupportedFeature("disconnected graph");
    }
    assign_directions();
    std::string out;
    render(0, -1, out);
    return out;
  }

 private:
  void plan_tree() {
    const int n = g_.atom_count();
    visited_.assign(n, false);
    tree_children_.assign(n, {});
    open_here_.assign(n, {});
    close_here_.assign(n, {});
    emission_.assign(g_.bond_count(), BondEmission{});
    bond_used_.assign(g_.bond_count(), false);
    plan_visit(0, -1);
    number_tokens(0);
  }

  void plan_visit(NodeId v, BondId via) {
    visited_[v] = true;
    visit_order_.push_back(v);
    if (via >= 0) {
      const Bond& b = g_.bond(via);
      NodeId parent = (b.u == v) ? b.v : b.u;
      emission_[via] = {parent, v, -1, 0};
    }
    for (const auto& inc : g_.incident(v)) {
      if (inc.bond == via || bond_used_[inc.bond]) continue;
      if (visited_[inc.neighbor]) {
        // Ring closure; symbol and digit open at the earlier-written atom,
        // the digit alone closes at v.
        bond_used_[inc.bond] = true;
        emission_[inc.bond] = {inc.neighbor, v, -1, 0};
        open_here_[inc.neighbor].push_back(inc.bond);
        close_here_[v].push_back(inc.bond);
        continue;
      }
      bond_used_[inc.bond] = true;
      tree_children_[v].push_back(inc.bond);
      plan_visit(inc.neighbor, inc.bond);
    }
  }

  // Sequence numbers follow the rendered token order, so "first-written"
  // below means exactly what a reader of the output sees first.
  void number_tokens(NodeId v) {
    for (BondId rb : open_here_[v]) emission_[rb].sequence = sequence_++;
    for (BondId cb : tree_children_[v]) {
      emission_[cb].sequence = sequence_++;
      number_tokens(emission_[cb].to);
    }
  }

  // First-written single bond at `anchor`, excluding `exclude`.
  BondId carrier_for(NodeId anchor, BondId exclude) const {
    BondId best = -1;
    for (const auto& inc : g_.incident(anchor)) {
      if (inc.bond == exclude) continue;
      if (g_.bond(inc.bond).label.order != 1) continue;
      if (best < 0 ||
          emission_[inc.bond].sequence < emission_[best].sequence) {
        best = inc.bond;
      }
    }
    return best;
  }

  // Parity constraint solving over carrier bonds: each tagged double bond
  // relates the '/'-ness of its two carriers.
  void assign_directions() {
    struct Constraint {
      BondId a;
      BondId b;
      bool differ;
    };
    std::vector<Constraint> constraints;
    std::vector<BondId> variables;
    auto mark_variable = [&](BondId b) {
      if (std::find(variables.begin(), variables.end(), b) == variables.end()) {
        variables.push_back(b);
      }
    };
    for (BondId b = 0; b < g_.bond_count(); ++b) {
      const Bond& bond = g_.bond(b);
      if (bond.label.ez == EzConfig::None) continue;
      BondId cu = carrier_for(bond.u, b);
      BondId cv = carrier_for(bond.v, b);
      if (cu < 0 || cv < 0) {
        throw UnsupportedFeature("no single bond available to express E/Z tag");
      }
      // up(x,anchor) = slash XOR (anchor written second in the bond token).
      bool flip_u = emission_[cu].to == bond.u;
      bool flip_v = emission_[cv].to == bond.v;
      bool want_same_up = (bond.label.ez == EzConfig::Z);
      // up_u == up_v  <=>  slash_u XOR flip_u == slash_v XOR flip_v.
      bool differ = want_same_up ? (flip_u != flip_v) : (flip_u == flip_v);
      constraints.push_back({cu, cv, differ});
      mark_variable(cu);
      mark_variable(cv);
    }
    // Two directional singles meeting at a tagged double bond's endpoint sit
    // on opposite sides of its axis, and the reader checks exactly that.
    for (BondId b = 0; b < g_.bond_count(); ++b) {
      const Bond& bond = g_.bond(b);
      if (bond.label.ez == EzConfig::None) continue;
      for (NodeId anchor : {bond.u, bond.v}) {
        std::vector<BondId> here;
        for (const auto& inc : g_.incident(anchor)) {
          if (inc.bond == b) continue;
          if (g_.bond(inc.bond).label.order != 1) continue;
          if (std::find(variables.begin(), variables.end(), inc.bond) !=
              variables.end()) {
            here.push_back(inc.bond);
          }
        }
        for (std::size_t i = 0; i + 1 < here.size(); ++i) {
          for (std::size_t j = i + 1; j < here.size(); ++j) {
            bool flip_i = emission_[here[i]].to == anchor;
            bool flip_j = emission_[here[j]].to == anchor;
            constraints.push_back({here[i], here[j], flip_i == flip_j});
          }
        }
      }
    }
    // Union-find with parity.
    std::map<BondId, std::pair<BondId, bool>> parent;  // bond -> (parent, parity)
    for (BondId v : variables) parent[v] = {v, false};
    std::function<std::pair<BondId, bool>(BondId)> find =
        [&](BondId x) -> std::pair<BondId, bool> {
      auto [p, par] = parent[x];
      if (p == x) return {x, false};
      auto [root, above] = find(p);
      parent[x] = {root, par != above};
      return {root, par != above};
    };
    for (const auto& c : constraints) {
      auto [ra, pa] = find(c.a);
      auto [rb, pb] = find(c.b);
      if (ra == rb) {
        if ((pa != pb) != c.differ) {
          throw UnsupportedFeature("inconsistent E/Z tag combination");
        }
        continue;
      }
      parent[ra] = {rb, (pa != pb) != c.differ};
    }
    for (BondId v : variables) {
      auto [root, par] = find(v);
      emission_[v].direction = par ? -1 : 1;
    }
  }

  void write_atom(NodeId v, std::string& out) const {
    const AtomLabel& label = g_.atom(v);
    int bond_sum = g_.weighted_degree(v);
    bool bare_ok = false;
    if (label.charge == 0 && label.chirality == Chirality::None &&
        label.element != Element::H) {
      auto def = ValenceTable::resolve_at_least(label.element, 0, bond_sum);
      bare_ok = def && *def == label.valence &&
                label.implicit_h == *def - bond_sum;
    }
    if (bare_ok) {
      out += element_symbol(label.element);
      return;
    }
    out += '[';
    out += element_symbol(label.element);
    if (label.chirality == Chirality::CCW) out += '@';
    if (label.chirality == Chirality::CW) out += "@@";
    if (label.implicit_h > 0) {
      out += 'H';
      if (label.implicit_h > 1) out += std::to_string(label.implicit_h);
    }
    if (label.charge != 0) {
      out += label.charge > 0 ? '+' : '-';
      if (std::abs(label.charge) > 1) out += std::to_string(std::abs(label.charge));
    }
    out += ']';
  }

  void write_bond_symbol(BondId b, std::string& out) const {
    const Bond& bond = g_.bond(b);
    if (bond.label.order == 2) out += '=';
    else if (bond.label.order == 3) out += '#';
    else if (emission_[b].direction > 0) out += '/';
    else if (emission_[b].direction < 0) out += '\\';
  }

  void render(NodeId v, BondId via, std::string& out) {
    if (via >= 0) write_bond_symbol(via, out);
    write_atom(v, out);
    for (BondId rb : open_here_[v]) {
      write_bond_symbol(rb, out);
      out += ring_digit(rb, true);
    }
    for (BondId rb : close_here_[v]) out += ring_digit(rb, false);
    const auto& children = tree_children_[v];
    for (std::size_t i = 0; i < children.size(); ++i) {
      BondId cb = children[i];
      const Bond& b = g_.bond(cb);
      NodeId child = (emission_[cb].to);
      if (i + 1 < children.size()) {
        out += '(';
        render(child, cb, out);
        out += ')';
      } else {
        render(child, cb, out);
      }
      (void)b;
    }
  }

  std::string ring_digit(BondId bond, bool opening) {
    if (opening) {
      int digit = 1;
      while (active_digits_.count(digit)) ++digit;
      if (digit > 99) throw UnsupportedFeature("too many open ring bonds");
      active_digits_.insert(digit);
      digit_of_[bond] = digit;
    }
    auto it = digit_of_.find(bond);
    int digit = it->second;
    if (!opening) {
      active_digits_.erase(digit);
      digit_of_.erase(it);
    }
    if (digit > 9) return "%" + std::to_string(digit);
    return std::to_string(digit);
  }

  const MolecularGraph& g_;
  std::vector<bool> visited_;
  std::vector<NodeId> visit_order_;
  std::vector<std::vector<BondId>> tree_children_;
  std::vector<std::vector<BondId>> open_here_;
  std::vector<std::vector<BondId>> close_here_;
  std::vector<BondEmission> emission_;
  std::vector<bool> bond_used_;
  int sequence_ = 0;
  std::set<int> active_digits_;
  std::map<BondId, int> digit_of_;
};

}  // namespace

std::string write_smiles(const MolecularGraph& g) {
  auto violations = check_molecular_graph(g);
  if (!violations.empty()) {
    throw UnsupportedFeature("graph fails the degree condition: " +
                             violations.front().message);
  }
  return Writer(g).run();
}

std::pair<std::vector<MolecularGraph>, CorpusReport> parse_dataset_lines(
    const std::vector<std::string>& lines) {
  std::vector<MolecularGraph> graphs;
  CorpusReport report;
  int line_number = 0;
  for (const std::string& raw : lines) {
    ++line_number;
    std::string line = raw;
    if (auto cr = line.find('\r'); cr != std::string::npos) line.erase(cr);
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;          // blank
    if (token[0] == '#') continue;             // comment
    try {
      graphs.push_back(parse_smiles(token));
      ++report.accepted;
    } catch (const Error& e) {
      report.rejected.push_back(
          {line_number, token, std::string(e.kind()) + ": " + e.what()});
    }
  }
  return {std::move(graphs), std::move(report)};
}

std::pair<std::vector<MolecularGraph>, CorpusReport> load_dataset(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  if (in.bad()) throw IoError("read failure on '" + path + "'");
  return parse_dataset_lines(lines);
}

}  // namespace mhg
