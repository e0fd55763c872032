#include <doctest.h>

#include <set>

#include "mhg/errors.hpp"
#include "mhg/optimize.hpp"
#include "mhg/smiles.hpp"

#include "helpers.hpp"

using namespace mhg;

namespace {

InferenceResult corpus_grammar() {
  return infer(helpers::encode_all(helpers::parse_all(
      helpers::small_molecules())));
}

}  // namespace

TEST_CASE("rule_histogram counts rule usage") {
  auto result = corpus_grammar();
  const ParseSequence& seq = result.sequences[0];
  auto hist = rule_histogram(seq, result.mhg);
  REQUIRE(static_cast<int>(hist.size()) == result.mhg.rule_count());
  double total = 0.0;
  for (double c : hist) total += c;
  CHECK(total == doctest::Approx(static_cast<double>(seq.size())));
  CHECK_THROWS_AS(rule_histogram({99999}, result.mhg), UnknownRule);

  // A single-rule sequence is a one-hot vector.
  ProductionRule only;
  only.lhs = HyperedgeLabel::start();
  NodeId n = only.rhs.add_node(BondLabel{1, EzConfig::None});
  only.rhs.add_hyperedge(
      HyperedgeLabel::terminal(make_atom_label(Element::C, 0, 3)), {n});
  only.rhs.add_hyperedge(
      HyperedgeLabel::terminal(make_atom_label(Element::C, 0, 3)), {n});
  Mhg tiny;
  tiny.add_rule(canonicalize(only));
  auto one_hot = rule_histogram({0}, tiny);
  CHECK(one_hot == std::vector<double>{1.0});
}

TEST_CASE("mutate yields replayable sequences and can reach new molecules") {
  auto result = corpus_grammar();
  const Mhg& mhg = result.mhg;
  const ParseSequence& seq = result.sequences[3];  // cyclohexane
  MolecularGraph original = dec_h(derive(mhg, seq));

  int distinct = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    ParseSequence mutated = mutate(seq, mhg, seed);
    Hypergraph h = derive(mhg, mutated);
    CHECK(check_molecular_hypergraph(h).empty());
    if (!isomorphic(dec_h(h), original)) ++distinct;
  }
  CHECK(distinct >= 1);
}

TEST_CASE("mutating under a single-rule grammar is the identity") {
  ProductionRule only;
  only.lhs = HyperedgeLabel::start();
  NodeId n = only.rhs.add_node(BondLabel{1, EzConfig::None});
  only.rhs.add_hyperedge(
      HyperedgeLabel::terminal(make_atom_label(Element::C, 0, 3)), {n});
  only.rhs.add_hyperedge(
      HyperedgeLabel::terminal(make_atom_label(Element::C, 0, 3)), {n});
  Mhg tiny;
  tiny.add_rule(canonicalize(only));
  CHECK(mutate({0}, tiny, 7) == ParseSequence{0});
}

TEST_CASE("feature pipeline embeds isomorphic molecules identically") {
  auto result = corpus_grammar();
  FeaturePipeline pipeline =
      FeaturePipeline::fit(result.sequences, result.mhg, 8);
  Rng rng(55);
  auto graphs = helpers::parse_all(helpers::small_molecules());
  for (const auto& g : graphs) {
    auto perm = helpers::random_permutation(g.atom_count(), rng);
    auto a = pipeline.embed(encode(result.mhg, enc_h(g)), result.mhg);
    auto b = pipeline.embed(
        encode(result.mhg, enc_h(helpers::permute_graph(g, perm))),
        result.mhg);
    CHECK(a == b);
  }
}

TEST_CASE("global_optimize with zero rounds returns nothing") {
  auto result = corpus_grammar();
  GlobalOptions options;
  options.rounds = 0;
  options.seed = 1;
  auto out = global_optimize(
      result.mhg, helpers::encode_all(helpers::parse_all({"CC", "CCO"})),
      [](const MolecularGraph& g) { return static_cast<double>(g.atom_count()); },
      options);
  CHECK(out.empty());
}

TEST_CASE("global_optimize emits valid, scored, deterministic results") {
  auto graphs = helpers::parse_all(helpers::small_molecules());
  auto corpus = helpers::encode_all(graphs);
  auto result = infer(corpus);
  PropertySpec spec = PropertySpec::fit(graphs);
  Oracle oracle = [&spec](const MolecularGraph& g) { return spec.score(g); };

  GlobalOptions options;
  options.rounds = 2;
  options.per_round = 4;
  options.pca_dim = 8;
  options.seed = 99;
  options.pool_samples = 30;
  options.pool_mutations_per_top = 3;
  options.top_for_mutation = 5;

  auto out = global_optimize(result.mhg, corpus, oracle, options);
  REQUIRE(static_cast<int>(out.size()) == 8);
  for (const auto& r : out) {
    CHECK(check_molecular_graph(r.graph).empty());
    CHECK(r.round >= 1);
    CHECK(r.round <= 2);
    CHECK(r.score == doctest::Approx(oracle(r.graph)));
  }
  // Sorted best-first.
  for (std::size_t i = 1; i < out.size(); ++i) {
    CHECK(out[i - 1].score >= out[i].score);
  }
  // Novelty flags agree with a direct isomorphism sweep.
  for (const auto& r : out) {
    bool in_corpus = false;
    for (const auto& g : graphs) {
      if (isomorphic(g, r.graph)) in_corpus = true;
    }
    CHECK(r.novel == !in_corpus);
  }
  // Same seed, same run.
  auto out2 = global_optimize(result.mhg, corpus, oracle, options);
  REQUIRE(out2.size() == out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out[i].seq == out2[i].seq);
    CHECK(out[i].score == out2[i].score);
  }
}

TEST_CASE("local_optimize respects the similarity constraint") {
  auto graphs = helpers::parse_all(helpers::small_molecules());
  auto corpus = helpers::encode_all(graphs);
  auto result = infer(corpus);
  PropertySpec raw = PropertySpec::raw();
  Oracle oracle = [&raw](const MolecularGraph& g) { return raw.score(g); };

  LocalOptions options;
  options.tau = 0.2;
  options.iterations = 40;

  int successes = 0;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    options.seed = 1000 + i;
    LocalResult r = local_optimize(graphs[i], result.mhg, oracle, options);
    if (!r.success) continue;
    ++successes;
    REQUIRE(r.best.has_value());
    CHECK(check_molecular_graph(*r.best).empty());
    CHECK(r.similarity >= options.tau);
    CHECK_FALSE(isomorphic(*r.best, graphs[i]));
    CHECK(r.improvement ==
          doctest::Approx(r.best_score - oracle(graphs[i])));
    double check_sim =
        tanimoto(morgan_fingerprint(graphs[i], options.radius, options.bits),
                 morgan_fingerprint(*r.best, options.radius, options.bits));
    CHECK(r.similarity == doctest::Approx(check_sim));
  }
  CHECK(successes >= 1);
}

TEST_CASE("local_optimize at tau=1 effectively never succeeds") {
  auto graphs = helpers::parse_all({"CCO", "CCC", "CCCC", "CC(C)C"});
  auto result = infer(helpers::encode_all(graphs));
  PropertySpec raw = PropertySpec::raw();
  Oracle oracle = [&raw](const MolecularGraph& g) { return raw.score(g); };
  LocalOptions options;
  options.tau = 1.0;
  options.iterations = 30;
  options.seed = 5;
  LocalResult r = local_optimize(graphs[0], result.mhg, oracle, options);
  if (r.success) {
    // Only possible for a distinct molecule with an identical fingerprint.
    CHECK(r.similarity == doctest::Approx(1.0));
    CHECK_FALSE(isomorphic(*r.best, graphs[0]));
  }
}

TEST_CASE("local_optimize propagates NotInLanguage for foreign molecules") {
  auto result = infer(helpers::encode_all(helpers::parse_all({"CCO", "CCC"})));
  PropertySpec raw = PropertySpec::raw();
  Oracle oracle = [&raw](const MolecularGraph& g) { return raw.score(g); };
  LocalOptions options;
  options.seed = 3;
  CHECK_THROWS_AS(
      local_optimize(parse_smiles("CCBr"), result.mhg, oracle, options),
      NotInLanguage);
}
