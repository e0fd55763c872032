#include "mhg/optimize.hpp"

#include <algorithm>
#include <limits>

#include "mhg/errors.hpp"
#include "mhg/rng.hpp"

namespace mhg {

std::vector<double> rule_histogram(const ParseSequence& seq, const Mhg& mhg) {
  std::vector<double> hist(mhg.rule_count(), 0.0);
  for (int id : seq) {
    if (id < 0 || id >= mhg.rule_count()) {
      throw UnknownRule("rule id " + std::to_string(id) +
                        " is not in the grammar");
    }
    hist[id] += 1.0;
  }
  return hist;
}

ParseSequence mutate(const ParseSequence& seq, const Mhg& mhg,
                     std::uint64_t seed) {
  constexpr int kMutationBudget = 500;
  std::vector<int> span_end = subtree_spans(mhg, seq);
  Rng rng(seed);
  int position = static_cast<int>(rng.below(seq.size()));
  const HyperedgeLabel& root = mhg.rule(seq[position]).lhs;
  ParseSequence replacement =
      sample_completion(mhg, root, rng, kMutationBudget);
  ParseSequence out;
  out.insert(out.end(), seq.begin(), seq.begin() + position);
  out.insert(out.end(), replacement.begin(), replacement.end());
  out.insert(out.end(), seq.begin() + span_end[position], seq.end());
  return out;
}

FeaturePipeline FeaturePipeline::fit(const std::vector<ParseSequence>& sequences,
                                     const Mhg& mhg, int dim) {
  std::vector<std::vector<double>> rows;
  rows.reserve(sequences.size());
  for (const ParseSequence& seq : sequences) {
    rows.push_back(rule_histogram(seq, mhg));
  }
  int effective = std::min<int>(
      dim, std::min<int>(static_cast<int>(rows.size()), mhg.rule_count()));
  FeaturePipeline pipeline;
  pipeline.pca = pca_fit(rows, std::max(1, effective));

  std::vector<std::vector<double>> projected;
  projected.reserve(rows.size());
  for (const auto& row : rows) {
    projected.push_back(pca_project(pipeline.pca, row));
  }
  for (int k = 0; k < pipeline.pca.dim; ++k) {
    std::vector<double> column;
    column.reserve(projected.size());
    for (const auto& p : projected) column.push_back(p[k]);
    pipeline.scalers.push_back(Standardizer::fit(column));
  }
  return pipeline;
}

std::vector<double> FeaturePipeline::embed(const ParseSequence& seq,
                                           const Mhg& mhg) const {
  std::vector<double> projected = pca_project(pca, rule_histogram(seq, mhg));
  for (std::size_t k = 0; k < projected.size(); ++k) {
    projected[k] = scalers[k].transform(projected[k]);
  }
  return projected;
}

namespace {

struct LabeledPoint {
  ParseSequence seq;
  MolecularGraph graph;
  double score = 0.0;
};

// Cheap invariant prefilter before the full isomorphism check.
std::vector<int> graph_signature(const MolecularGraph& g) {
  std::vector<int> sig{g.atom_count(), g.bond_count()};
  std::vector<int> atoms;
  for (const AtomLabel& a : g.atoms()) {
    atoms.push_back(static_cast<int>(a.element) * 1000 + a.implicit_h * 10 +
                    a.charge + 5);
  }
  std::sort(atoms.begin(), atoms.end());
  sig.insert(sig.end(), atoms.begin(), atoms.end());
  return sig;
}

bool matches_any(const MolecularGraph& g,
                 const std::vector<MolecularGraph>& pool,
                 const std::vector<std::vector<int>>& pool_signatures,
                 const std::vector<int>& signature) {
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool_signatures[i] == signature && isomorphic(pool[i], g)) return true;
  }
  return false;
}

}  // namespace

std::vector<ScoredMolecule> global_optimize(
    const Mhg& mhg, const std::vector<Hypergraph>& corpus, const Oracle& oracle,
    const GlobalOptions& options) {
  std::vector<ScoredMolecule> evaluated;
  if (options.rounds <= 0 || options.per_round <= 0) return evaluated;

  // Labeled starting data.
  std::vector<LabeledPoint> data;
  data.reserve(corpus.size());
  std::vector<ParseSequence> corpus_sequences;
  std::vector<MolecularGraph> corpus_graphs;
  for (const Hypergraph& h : corpus) {
    LabeledPoint point;
    point.seq = encode(mhg, h);
    point.graph = dec_h(h);
    point.score = oracle(point.graph);
    corpus_sequences.push_back(point.seq);
    corpus_graphs.push_back(point.graph);
    data.push_back(std::move(point));
  }
  std::vector<std::vector<int>> corpus_signatures;
  corpus_signatures.reserve(corpus_graphs.size());
  for (const auto& g : corpus_graphs) {
    corpus_signatures.push_back(graph_signature(g));
  }

  FeaturePipeline pipeline =
      FeaturePipeline::fit(corpus_sequences, mhg, options.pca_dim);

  std::vector<double> scores;
  for (const auto& point : data) scores.push_back(point.score);
  Standardizer score_scaler = Standardizer::fit(scores);

  std::vector<std::vector<double>> inputs;
  std::vector<double> targets;
  for (const auto& point : data) {
    inputs.push_back(pipeline.embed(point.seq, mhg));
    targets.push_back(score_scaler.transform(point.score));
  }

  Rng rng(options.seed);
  for (int round = 1; round <= options.rounds; ++round) {
    GpModel gp = gp_fit(inputs, targets, options.gp);
    double incumbent = *std::max_element(targets.begin(), targets.end());

    // Candidate pool: fresh grammar samples plus mutations of the current
    // best molecules.
    std::vector<ParseSequence> pool;
    for (int i = 0; i < options.pool_samples; ++i) {
      pool.push_back(
          sample_derivation(mhg, rng.fork_seed(), options.max_expansions));
    }
    std::vector<int> ranked(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) ranked[i] = static_cast<int>(i);
    std::stable_sort(ranked.begin(), ranked.end(), [&](int a, int b) {
      return data[a].score > data[b].score;
    });
    int top = std::min<int>(options.top_for_mutation,
                            static_cast<int>(ranked.size()));
    for (int t = 0; t < top; ++t) {
      for (int i = 0; i < options.pool_mutations_per_top; ++i) {
        pool.push_back(mutate(data[ranked[t]].seq, mhg, rng.fork_seed()));
      }
    }

    std::vector<std::pair<double, int>> acquisition;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      GpPrediction pred = gp_predict(gp, pipeline.embed(pool[i], mhg));
      acquisition.emplace_back(
          expected_improvement(pred.mean, pred.variance, incumbent),
          static_cast<int>(i));
    }
    std::stable_sort(acquisition.begin(), acquisition.end(),
                     [](const auto& a, const auto& b) {
                       return a.first > b.first;
                     });

    int taken = 0;
    for (const auto& [ei, index] : acquisition) {
      if (taken >= options.per_round) break;
      const ParseSequence& seq = pool[index];
      MolecularGraph graph = dec_h(derive(mhg, seq));
      double score = oracle(graph);

      ScoredMolecule out;
      out.graph = graph;
      out.seq = seq;
      out.score = score;
      out.round = round;
      out.novel = !matches_any(graph, corpus_graphs, corpus_signatures,
                               graph_signature(graph));
      evaluated.push_back(out);

      inputs.push_back(pipeline.embed(seq, mhg));
      targets.push_back(score_scaler.transform(score));
      data.push_back(LabeledPoint{seq, std::move(graph), score});
      ++taken;
    }
  }

  std::stable_sort(evaluated.begin(), evaluated.end(),
                   [](const ScoredMolecule& a, const ScoredMolecule& b) {
                     return a.score > b.score;
                   });
  return evaluated;
}

LocalResult local_optimize(const MolecularGraph& g0, const Mhg& mhg,
                           const Oracle& objective,
                           const LocalOptions& options) {
  ParseSequence current = encode(mhg, enc_h(g0));
  Fingerprint fp0 = morgan_fingerprint(g0, options.radius, options.bits);

  LocalResult result;
  result.start_score = objective(g0);
  double best = -std::numeric_limits<double>::infinity();

  Rng rng(options.seed);
  for (int k = 0; k < options.iterations; ++k) {
    current = mutate(current, mhg, rng.fork_seed());
    MolecularGraph candidate = dec_h(derive(mhg, current));
    double similarity =
        tanimoto(fp0, morgan_fingerprint(candidate, options.radius,
                                         options.bits));
    if (similarity < options.tau) continue;
    if (isomorphic(candidate, g0)) continue;
    double score = objective(candidate);
    if (score <= best) continue;
    best = score;
    result.success = true;
    result.best = candidate;
    result.best_score = score;
    result.similarity = similarity;
    result.improvement = score - result.start_score;
  }
  return result;
}

}  // namespace mhg
