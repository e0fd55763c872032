#ifndef MHG_OPTIMIZE_HPP
#define MHG_OPTIMIZE_HPP

#include <functional>
#include <optional>
#include <vector>

#include "mhg/fingerprint.hpp"
#include "mhg/inference.hpp"
#include "mhg/numerics.hpp"
#include "mhg/properties.hpp"

namespace mhg {

// Count of each rule id in the sequence; dimension = grammar rule count.
std::vector<double> rule_histogram(const ParseSequence& seq, const Mhg& mhg);

// Picks a uniform random parse-tree node and resamples its subtree from the
// grammar, rooted at that node's label. The result replays under derive.
ParseSequence mutate(const ParseSequence& seq, const Mhg& mhg,
                     std::uint64_t seed);

// Rule-count histogram -> PCA projection -> per-dimension standardization.
// Stands in for a learned latent embedding.
struct FeaturePipeline {
  PcaModel pca;
  std::vector<Standardizer> scalers;

  static FeaturePipeline fit(const std::vector<ParseSequence>& sequences,
                             const Mhg& mhg, int dim);
  std::vector<double> embed(const ParseSequence& seq, const Mhg& mhg) const;
};

using Oracle = std::function<double(const MolecularGraph&)>;

struct GlobalOptions {
  int rounds = 5;             // K
  int per_round = 50;         // M
  int pca_dim = 40;
  std::uint64_t seed = 0;
  int pool_samples = 100;
  int pool_mutations_per_top = 10;
  int top_for_mutation = 10;
  int max_expansions = 500;
  GpHyper gp;
};

struct ScoredMolecule {
  MolecularGraph graph;
  ParseSequence seq;
  double score = 0.0;
  int round = 0;
  bool novel = false;  // not isomorphic to any corpus molecule
};

// Candidate-pool Bayesian optimization: round k fits a GP on the labeled
// data, ranks a pool of grammar samples and mutations of the current best
// molecules by expected improvement, evaluates the top M with the oracle and
// augments the data. Returns all evaluated molecules, best score first.
std::vector<ScoredMolecule> global_optimize(
    const Mhg& mhg, const std::vector<Hypergraph>& corpus, const Oracle& oracle,
    const GlobalOptions& options);

struct LocalOptions {
  double tau = 0.4;
  int iterations = 80;  // K
  std::uint64_t seed = 0;
  int radius = 2;
  int bits = 2048;
  int max_expansions = 500;
};

struct LocalResult {
  bool success = false;
  std::optional<MolecularGraph> best;
  double best_score = 0.0;
  double similarity = 0.0;
  double improvement = 0.0;
  double start_score = 0.0;
};

// Random walk of subtree-resampling mutations; keeps the best candidate with
// tanimoto(g0, g) >= tau, g distinct from g0 and an improved objective.
// Throws NotInLanguage when g0 cannot be encoded.
LocalResult local_optimize(const MolecularGraph& g0, const Mhg& mhg,
                           const Oracle& objective, const LocalOptions& options);

}  // namespace mhg

#endif  // MHG_OPTIMIZE_HPP
