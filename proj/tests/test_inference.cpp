#include <doctest.h>

#include <set>

#include "mhg/errors.hpp"
#include "mhg/inference.hpp"
#include "mhg/optimize.hpp"
#include "mhg/smiles.hpp"

#include "helpers.hpp"

using namespace mhg;

TEST_CASE("extract_rule on the ethane decomposition") {
  Hypergraph h = enc_h(parse_smiles("CC"));
  TreeDecomposition td = decompose(h);

  const auto& root = td.tree[td.root];
  ProductionRule root_rule = extract_rule(td, td.root, h);
  CHECK(root_rule.is_start());
  CHECK(root_rule.external.empty());
  CHECK(root_rule.rhs.node_count() == 1);
  CHECK(root_rule.rhs.hyperedge_count() == 2);
  CHECK(check_condition1(root_rule));

  // A leaf holding one hyperedge gives a terminal-only rhs.
  for (int t = 0; t < td.size(); ++t) {
    if (t == td.root || !td.tree[t].children.empty()) continue;
    ProductionRule leaf_rule = extract_rule(td, t, h);
    CHECK(leaf_rule.nonterminals.empty());
    for (HyperedgeId e = 0; e < leaf_rule.rhs.hyperedge_count(); ++e) {
      CHECK(leaf_rule.rhs.hyperedge(e).label.kind ==
            HyperedgeLabel::Kind::Terminal);
    }
  }
  (void)root;
}

TEST_CASE("every extracted rule satisfies Condition 1") {
  for (const auto& smiles : helpers::small_molecules()) {
    Hypergraph h = enc_h(parse_smiles(smiles));
    TreeDecomposition td = decompose(h);
    CAPTURE(smiles);
    for (int t = 0; t < td.size(); ++t) {
      CHECK(check_condition1(extract_rule(td, t, h)));
    }
  }
}

TEST_CASE("check_condition1 rejects bad degree patterns") {
  SUBCASE("internal node of degree 1") {
    ProductionRule rule;
    rule.lhs = HyperedgeLabel::start();
    NodeId n = rule.rhs.add_node(BondLabel{1, EzConfig::None});
    rule.rhs.add_hyperedge(
        HyperedgeLabel::terminal(make_atom_label(Element::C, 0, 3)), {n});
    CHECK_FALSE(check_condition1(rule));
  }
  SUBCASE("external node of degree 2") {
    ProductionRule rule;
    rule.lhs = HyperedgeLabel::nonterminal({BondLabel{1, EzConfig::None}});
    NodeId n = rule.rhs.add_node(BondLabel{1, EzConfig::None});
    rule.external = {n};
    rule.rhs.add_hyperedge(
        HyperedgeLabel::terminal(make_atom_label(Element::C, 0, 3)), {n});
    rule.rhs.add_hyperedge(
        HyperedgeLabel::terminal(make_atom_label(Element::C, 0, 3)), {n});
    CHECK_FALSE(check_condition1(rule));
  }
}

TEST_CASE("infer on a single molecule reconstructs it") {
  Hypergraph h = enc_h(parse_smiles("CC"));
  auto result = infer({h});
  CHECK_FALSE(result.mhg.start_rules().empty());
  REQUIRE(result.sequences.size() == 1);
  CHECK(isomorphic(dec_h(derive(result.mhg, result.sequences[0])),
                   parse_smiles("CC")));
}

TEST_CASE("infer reconstructs a diverse corpus exactly") {
  auto graphs = helpers::parse_all(helpers::small_molecules());
  auto result = infer(helpers::encode_all(graphs));
  REQUIRE(result.sequences.size() == graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    CAPTURE(i);
    CHECK(isomorphic(dec_h(derive(result.mhg, result.sequences[i])),
                     graphs[i]));
  }
}

TEST_CASE("inferred rule sets grow monotonically with the corpus") {
  auto x = helpers::parse_all({"CCO", "CCC"});
  auto xy = helpers::parse_all({"CCO", "CCC", "C1CCCCC1", "CC(C)=O"});
  auto rx = infer(helpers::encode_all(x));
  auto rxy = infer(helpers::encode_all(xy));
  std::set<std::string> keys_x, keys_xy;
  for (int id = 0; id < rx.mhg.rule_count(); ++id) {
    keys_x.insert(rx.mhg.key_of(id));
  }
  for (int id = 0; id < rxy.mhg.rule_count(); ++id) {
    keys_xy.insert(rxy.mhg.key_of(id));
  }
  for (const auto& key : keys_x) {
    CHECK(keys_xy.count(key) == 1);
  }
}

TEST_CASE("duplicated molecules add no rules and encode identically") {
  auto once = infer(helpers::encode_all(helpers::parse_all({"CCO"})));
  auto twice = infer(helpers::encode_all(helpers::parse_all({"CCO", "CCO"})));
  CHECK(once.mhg.rule_count() == twice.mhg.rule_count());
  REQUIRE(twice.sequences.size() == 2);
  CHECK(twice.sequences[0] == twice.sequences[1]);
}

TEST_CASE("encode closure and NotInLanguage") {
  auto graphs = helpers::parse_all({"CCO", "CCC", "CCCC"});
  auto result = infer(helpers::encode_all(graphs));
  SUBCASE("training molecules encode to their recorded sequences") {
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      CHECK(encode(result.mhg, enc_h(graphs[i])) == result.sequences[i]);
    }
  }
  SUBCASE("a fragment-compatible held-out molecule encodes") {
    // A longer chain reuses the chain rules of the training set.
    ParseSequence seq = encode(result.mhg, enc_h(parse_smiles("CCCCC")));
    CHECK(isomorphic(dec_h(derive(result.mhg, seq)), parse_smiles("CCCCC")));
  }
  SUBCASE("an unseen element cannot be encoded") {
    CHECK_THROWS_AS(encode(result.mhg, enc_h(parse_smiles("CCBr"))),
                    NotInLanguage);
  }
}

TEST_CASE("isomorphic molecules encode to equal rule histograms") {
  auto graphs = helpers::parse_all(helpers::small_molecules());
  auto result = infer(helpers::encode_all(graphs));
  Rng rng(31);
  for (const auto& g : graphs) {
    auto perm = helpers::random_permutation(g.atom_count(), rng);
    MolecularGraph shuffled = helpers::permute_graph(g, perm);
    ParseSequence a = encode(result.mhg, enc_h(g));
    ParseSequence b = encode(result.mhg, enc_h(shuffled));
    CHECK(rule_histogram(a, result.mhg) == rule_histogram(b, result.mhg));
  }
}

TEST_CASE("grammar_stats reports totals and coverage") {
  auto train_graphs = helpers::parse_all({"CCO", "CCC", "CCCC", "CC(C)C"});
  auto train = helpers::encode_all(train_graphs);
  auto result = infer(train);

  SUBCASE("held-out equal to training gives coverage 1") {
    GrammarStats stats = grammar_stats(result.mhg, train, train);
    CHECK(stats.total_rules == result.mhg.rule_count());
    CHECK(stats.start_rules ==
          static_cast<int>(result.mhg.start_rules().size()));
    CHECK(stats.coverage == doctest::Approx(1.0));
    CHECK_FALSE(stats.coverage_vacuous);
    CHECK(stats.mean_rules_per_molecule > 0.0);
    long total = 0;
    for (long c : stats.rule_frequency) total += c;
    CHECK(static_cast<double>(total) / train.size() ==
          doctest::Approx(stats.mean_rules_per_molecule));
  }
  SUBCASE("empty held-out set is vacuously covered and flagged") {
    GrammarStats stats = grammar_stats(result.mhg, train, {});
    CHECK(stats.coverage == doctest::Approx(1.0));
    CHECK(stats.coverage_vacuous);
  }
  SUBCASE("unencodable held-out molecules lower coverage") {
    std::vector<Hypergraph> heldout = helpers::encode_all(
        helpers::parse_all({"CCCCC", "CCBr"}));  // second has a new element
    GrammarStats stats = grammar_stats(result.mhg, train, heldout);
    CHECK(stats.coverage == doctest::Approx(0.5));
  }
}
