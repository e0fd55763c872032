#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "mhg/commands.hpp"
#include "mhg/errors.hpp"

namespace {

using namespace mhg::cli;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (auto env = seed_from_env()) return *env;
  throw mhg::ConfigError(
      "a seed is required: pass --seed or set MHG_SEED");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Molecular hypergraph grammar toolkit"};
  app.require_subcommand(1);

  InferConfig infer_config;
  auto* infer = app.add_subcommand("infer", "Infer a grammar from a SMILES file");
  infer->add_option("--input", infer_config.input, "SMILES file")->required();
  infer->add_option("--grammar", infer_config.grammar_out, "output grammar JSON")
      ->required();
  infer->add_option("--sequences", infer_config.sequences_out,
                    "output parse sequence JSON");
  infer->add_option("--report", infer_config.report_out, "rejected-line TSV");

  EncodeConfig encode_config;
  auto* encode = app.add_subcommand("encode", "Encode molecules as parse sequences");
  encode->add_option("--grammar", encode_config.grammar, "grammar JSON")->required();
  encode->add_option("--input", encode_config.input, "SMILES file")->required();
  encode->add_option("--output", encode_config.output, "sequence JSON")->required();

  DecodeConfig decode_config;
  auto* decode = app.add_subcommand("decode", "Decode parse sequences to SMILES");
  decode->add_option("--grammar", decode_config.grammar, "grammar JSON")->required();
  decode->add_option("--input", decode_config.input, "sequence JSON")->required();
  decode->add_option("--output", decode_config.output, "SMILES file")->required();

  SampleConfig sample_config;
  std::optional<std::uint64_t> sample_seed;
  auto* sample = app.add_subcommand("sample", "Sample molecules from a grammar");
  sample->add_option("--grammar", sample_config.grammar, "grammar JSON")->required();
  sample->add_option("--count", sample_config.count, "number of samples");
  sample->add_option("--seed", sample_seed, "random seed");
  sample->add_option("--output", sample_config.output,
                     "SMILES output file ('-' for stdout)");
  sample->add_option("--max-expansions", sample_config.max_expansions,
                     "per-derivation expansion budget");

  RoundtripConfig roundtrip_config;
  auto* roundtrip =
      app.add_subcommand("roundtrip", "Encode+decode a corpus and compare");
  roundtrip->add_option("--grammar", roundtrip_config.grammar, "grammar JSON")
      ->required();
  roundtrip->add_option("--input", roundtrip_config.input, "SMILES file")
      ->required();
  roundtrip->add_option("--report", roundtrip_config.report_out,
                        "per-molecule TSV");

  StatsConfig stats_config;
  auto* stats = app.add_subcommand("stats", "Grammar statistics and coverage");
  stats->add_option("--grammar", stats_config.grammar, "grammar JSON")->required();
  stats->add_option("--train", stats_config.train, "training SMILES file")
      ->required();
  stats->add_option("--heldout", stats_config.heldout, "held-out SMILES file");
  stats->add_option("--output", stats_config.output, "rule frequency TSV");

  OptimizeGlobalConfig global_config;
  std::optional<std::uint64_t> global_seed;
  auto* global = app.add_subcommand("optimize-global",
                                    "Bayesian-optimization molecule search");
  global->add_option("--grammar", global_config.grammar, "grammar JSON")->required();
  global->add_option("--corpus", global_config.corpus, "labeled SMILES corpus")
      ->required();
  global->add_option("--output", global_config.output, "ranked TSV")->required();
  global->add_option("--property", global_config.property.name,
                     "built-in property name");
  global->add_option("--property-cmd", global_config.property.command,
                     "external property command");
  global->add_option("--rounds", global_config.rounds, "BO rounds (K)");
  global->add_option("--per-round", global_config.per_round,
                     "evaluations per round (M)");
  global->add_option("--pca-dim", global_config.pca_dim, "PCA dimension");
  global->add_option("--seed", global_seed, "random seed");
  global->add_option("--pool-samples", global_config.pool_samples,
                     "grammar samples per round");
  global->add_option("--pool-mutations", global_config.pool_mutations_per_top,
                     "mutations per top molecule");
  global->add_option("--top", global_config.top_for_mutation,
                     "top molecules to mutate");

  OptimizeLocalConfig local_config;
  std::optional<std::uint64_t> local_seed;
  auto* local = app.add_subcommand("optimize-local",
                                   "Similarity-constrained local search");
  local->add_option("--grammar", local_config.grammar, "grammar JSON")->required();
  local->add_option("--input", local_config.input, "seed molecules SMILES file")
      ->required();
  local->add_option("--output", local_config.output, "result TSV")->required();
  local->add_option("--property", local_config.property.name,
                    "built-in property name");
  local->add_option("--property-cmd", local_config.property.command,
                    "external property command");
  local->add_option("--tau", local_config.tau, "similarity threshold");
  local->add_option("--iterations", local_config.iterations, "mutation steps (K)");
  local->add_option("--seed", local_seed, "random seed");
  local->add_option("--radius", local_config.radius, "fingerprint radius");
  local->add_option("--bits", local_config.bits, "fingerprint width");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*infer) return cmd_infer(infer_config, std::cout, std::cerr);
    if (*encode) return cmd_encode(encode_config, std::cout, std::cerr);
    if (*decode) return cmd_decode(decode_config, std::cout, std::cerr);
    if (*sample) {
      sample_config.seed = resolve_seed(sample_seed);
      return cmd_sample(sample_config, std::cout, std::cerr);
    }
    if (*roundtrip) return cmd_roundtrip(roundtrip_config, std::cout, std::cerr);
    if (*stats) return cmd_stats(stats_config, std::cout, std::cerr);
    if (*global) {
      global_config.seed = resolve_seed(global_seed);
      return cmd_optimize_global(global_config, std::cout, std::cerr);
    }
    if (*local) {
      local_config.seed = resolve_seed(local_seed);
      return cmd_optimize_local(local_config, std::cout, std::cerr);
    }
  } catch (const mhg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const mhg::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kUsage;
  } catch (const mhg::Error& e) {
    std::cerr << "error (" << e.kind() << "): " << e.what() << "\n";
    return kPartial;
  }
  return kUsage;
}
