#include "mhg/commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mhg/errors.hpp"
#include "mhg/optimize.hpp"
#include "mhg/serialize.hpp"
#include "mhg/smiles.hpp"

namespace mhg::cli {

namespace {

std::string fmt(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

struct Corpus {
  std::vector<MolecularGraph> graphs;      // usable molecules only
  std::vector<Hypergraph> hypergraphs;     // enc_h of graphs, same order
  std::vector<std::string> smiles;         // writer output, same order
  CorpusReport report;                     // parse + encodability rejects
};

// Loads a SMILES file and keeps the molecules that can enter the hypergraph
// pipeline; everything else lands in the report.
Corpus load_corpus(const std::string& path) {
  Corpus corpus;
  auto [graphs, report] = load_dataset(path);
  corpus.report = std::move(report);
  int index = 0;
  for (MolecularGraph& g : graphs) {
    ++index;
    try {
      Hypergraph h = enc_h(g);
      corpus.smiles.push_back(write_smiles(g));
      corpus.hypergraphs.push_back(std::move(h));
      corpus.graphs.push_back(std::move(g));
    } catch (const Error& e) {
      corpus.report.rejected.push_back(
          {-index, "", std::string(e.kind()) + ": " + e.what()});
      --corpus.report.accepted;
    }
  }
  return corpus;
}

void write_reject_report(const CorpusReport& report, const std::string& path) {
  if (path.empty()) return;
  auto out = open_output(path);
  out << "line\ttext\treason\n";
  for (const auto& r : report.rejected) {
    out << r.line_number << "\t" << r.text << "\t" << r.reason << "\n";
  }
}

// Shell-quotes with single quotes so SMILES backslashes survive.
std::string shell_quote(const std::string& s) {
  std::string quoted = "'";
  for (char c : s) {
    if (c == '\'') quoted += "'\\''";
    else quoted += c;
  }
  quoted += "'";
  return quoted;
}

double run_external_oracle(const std::string& command,
                           const std::string& smiles) {
  std::string pipeline =
      "printf '%s\\n' " + shell_quote(smiles) + " | { " + command + "; }";
  FILE* pipe = popen(pipeline.c_str(), "r");
  if (pipe == nullptr) {
    throw Error("failed to launch property command");
  }
  double value = 0.0;
  int matched = std::fscanf(pipe, "%lf", &value);
  int status = pclose(pipe);
  if (matched != 1 || status != 0) {
    throw Error("property command failed for input " + smiles);
  }
  return value;
}

Oracle make_oracle(const PropertyConfig& config,
                   const std::vector<MolecularGraph>& fit_corpus) {
  if (!config.command.empty()) {
    std::string command = config.command;
    return [command](const MolecularGraph& g) {
      return run_external_oracle(command, write_smiles(g));
    };
  }
  if (config.name == "penalized_logp_std") {
    PropertySpec spec = PropertySpec::fit(fit_corpus);
    return [spec](const MolecularGraph& g) { return spec.score(g); };
  }
  if (config.name == "penalized_logp_raw") {
    PropertySpec spec = PropertySpec::raw();
    return [spec](const MolecularGraph& g) { return spec.score(g); };
  }
  throw ConfigError("unknown property '" + config.name +
                    "'; expected penalized_logp_std or penalized_logp_raw");
}

}  // namespace

std::optional<std::uint64_t> seed_from_env() {
  const char* env = std::getenv("MHG_SEED");
  if (env == nullptr || *env == '\0') return std::nullopt;
  return std::strtoull(env, nullptr, 10);
}

int cmd_infer(const InferConfig& config, std::ostream& out, std::ostream& err) {
  Corpus corpus = load_corpus(config.input);
  if (corpus.hypergraphs.empty()) {
    err << "no usable molecules in '" << config.input << "'\n";
    write_reject_report(corpus.report, config.report_out);
    return kUsage;
  }
  InferenceResult result = infer(corpus.hypergraphs);
  save_grammar(result.mhg, config.grammar_out);
  if (!config.sequences_out.empty()) {
    save_sequences(result.sequences, corpus.smiles, config.sequences_out);
  }
  write_reject_report(corpus.report, config.report_out);

  long total_length = 0;
  for (const auto& seq : result.sequences) {
    total_length += static_cast<long>(seq.size());
  }
  out << "molecules\t" << corpus.hypergraphs.size() << "\n";
  out << "rejected\t" << corpus.report.rejected.size() << "\n";
  out << "rules\t" << result.mhg.rule_count() << "\n";
  out << "start_rules\t" << result.mhg.start_rules().size() << "\n";
  out << "mean_rules_per_molecule\t"
      << fmt(static_cast<double>(total_length) /
             static_cast<double>(result.sequences.size()))
      << "\n";
  return corpus.report.rejected.empty() ? kOk : kPartial;
}

int cmd_encode(const EncodeConfig& config, std::ostream& out,
               std::ostream& err) {
  Mhg mhg = load_grammar(config.grammar);
  Corpus corpus = load_corpus(config.input);
  std::vector<ParseSequence> sequences;
  std::vector<std::string> smiles;
  int failed = static_cast<int>(corpus.report.rejected.size());
  for (std::size_t i = 0; i < corpus.hypergraphs.size(); ++i) {
    try {
      sequences.push_back(encode(mhg, corpus.hypergraphs[i]));
      smiles.push_back(corpus.smiles[i]);
    } catch (const NotInLanguage& e) {
      ++failed;
      err << "not in language: " << corpus.smiles[i] << "\n";
    }
  }
  save_sequences(sequences, smiles, config.output);
  out << "encoded\t" << sequences.size() << "\n";
  out << "failed\t" << failed << "\n";
  return failed == 0 ? kOk : kPartial;
}

int cmd_decode(const DecodeConfig& config, std::ostream& out,
               std::ostream& err) {
  Mhg mhg = load_grammar(config.grammar);
  auto [sequences, smiles] = load_sequences(config.input);
  auto file = open_output(config.output);
  int failed = 0;
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    try {
      file << write_smiles(dec_h(derive(mhg, sequences[i]))) << "\n";
    } catch (const Error& e) {
      ++failed;
      err << "sequence " << i << " failed: " << e.what() << "\n";
    }
  }
  out << "decoded\t" << sequences.size() - failed << "\n";
  out << "failed\t" << failed << "\n";
  return failed == 0 ? kOk : kPartial;
}

int cmd_sample(const SampleConfig& config, std::ostream& out,
               std::ostream& err) {
  if (config.count < 0) throw ConfigError("count must be >= 0");
  Mhg mhg = load_grammar(config.grammar);
  std::ostringstream lines;
  Rng master(config.seed);
  int valid = 0;
  for (int i = 0; i < config.count; ++i) {
    ParseSequence seq =
        sample_derivation(mhg, master.fork_seed(), config.max_expansions);
    MolecularGraph g = dec_h(derive(mhg, seq));
    if (check_molecular_graph(g).empty()) ++valid;
    lines << write_smiles(g) << "\n";
  }
  if (config.output == "-" || config.output.empty()) {
    out << lines.str();
  } else {
    auto file = open_output(config.output);
    file << lines.str();
  }
  err << "sampled\t" << config.count << "\n";
  err << "valid\t" << valid << "\n";
  return valid == config.count ? kOk : kPartial;
}

int cmd_roundtrip(const RoundtripConfig& config, std::ostream& out,
                  std::ostream& err) {
  Mhg mhg = load_grammar(config.grammar);
  Corpus corpus = load_corpus(config.input);
  std::ofstream report;
  if (!config.report_out.empty()) {
    report = open_output(config.report_out);
    report << "smiles\tstatus\n";
  }
  int reconstructed = 0;
  int not_in_language = 0;
  int failed = 0;
  for (std::size_t i = 0; i < corpus.hypergraphs.size(); ++i) {
    std::string status;
    try {
      ParseSequence seq = encode(mhg, corpus.hypergraphs[i]);
      MolecularGraph back = dec_h(derive(mhg, seq));
      if (isomorphic(back, corpus.graphs[i])) {
        ++reconstructed;
        status = "ok";
      } else {
        ++failed;
        status = "mismatch";
      }
    } catch (const NotInLanguage&) {
      ++not_in_language;
      status = "not_in_language";
    }
    if (report.is_open()) {
      report << corpus.smiles[i] << "\t" << status << "\n";
    }
  }
  int total = static_cast<int>(corpus.hypergraphs.size());
  out << "total\t" << total << "\n";
  out << "reconstructed\t" << reconstructed << "\n";
  out << "not_in_language\t" << not_in_language << "\n";
  out << "mismatched\t" << failed << "\n";
  out << "rate\t" << fmt(total == 0 ? 0.0 : static_cast<double>(reconstructed) / total)
      << "\n";
  (void)err;
  return (reconstructed == total && total > 0) ? kOk : kPartial;
}

int cmd_stats(const StatsConfig& config, std::ostream& out,
              std::ostream& err) {
  Mhg mhg = load_grammar(config.grammar);
  Corpus train = load_corpus(config.train);
  std::vector<Hypergraph> heldout;
  if (!config.heldout.empty()) {
    heldout = load_corpus(config.heldout).hypergraphs;
  }
  GrammarStats stats = grammar_stats(mhg, train.hypergraphs, heldout);
  out << "total_rules\t" << stats.total_rules << "\n";
  out << "start_rules\t" << stats.start_rules << "\n";
  out << "mean_rules_per_molecule\t" << fmt(stats.mean_rules_per_molecule)
      << "\n";
  out << "coverage\t" << fmt(stats.coverage)
      << (stats.coverage_vacuous ? "\t(vacuous)" : "") << "\n";
  if (!config.output.empty()) {
    auto file = open_output(config.output);
    file << "rule\tfrequency\n";
    for (std::size_t id = 0; id < stats.rule_frequency.size(); ++id) {
      file << id << "\t" << stats.rule_frequency[id] << "\n";
    }
  }
  (void)err;
  return kOk;
}

int cmd_optimize_global(const OptimizeGlobalConfig& config, std::ostream& out,
                        std::ostream& err) {
  if (config.rounds < 0 || config.per_round < 0) {
    throw ConfigError("rounds and per-round counts must be >= 0");
  }
  if (config.pca_dim < 1) throw ConfigError("pca dimension must be >= 1");
  Mhg mhg = load_grammar(config.grammar);
  Corpus corpus = load_corpus(config.corpus);
  if (corpus.hypergraphs.empty()) {
    err << "no usable molecules in '" << config.corpus << "'\n";
    return kUsage;
  }
  // Drop corpus molecules the grammar cannot encode.
  std::vector<Hypergraph> encodable;
  std::vector<MolecularGraph> encodable_graphs;
  int skipped = 0;
  for (std::size_t i = 0; i < corpus.hypergraphs.size(); ++i) {
    try {
      encode(mhg, corpus.hypergraphs[i]);
      encodable.push_back(corpus.hypergraphs[i]);
      encodable_graphs.push_back(corpus.graphs[i]);
    } catch (const NotInLanguage&) {
      ++skipped;
    }
  }
  if (encodable.empty()) {
    err << "grammar cannot encode any corpus molecule\n";
    return kUsage;
  }
  if (skipped > 0) err << "skipped " << skipped << " unencodable molecules\n";

  Oracle oracle = make_oracle(config.property, encodable_graphs);
  GlobalOptions options;
  options.rounds = config.rounds;
  options.per_round = config.per_round;
  options.pca_dim = config.pca_dim;
  options.seed = config.seed;
  options.pool_samples = config.pool_samples;
  options.pool_mutations_per_top = config.pool_mutations_per_top;
  options.top_for_mutation = config.top_for_mutation;
  options.max_expansions = config.max_expansions;

  auto results = global_optimize(mhg, encodable, oracle, options);

  auto file = open_output(config.output);
  file << "smiles\tscore\tround\tnovel\n";
  for (const auto& r : results) {
    file << write_smiles(r.graph) << "\t" << fmt(r.score) << "\t" << r.round
         << "\t" << (r.novel ? 1 : 0) << "\n";
  }
  out << "evaluated\t" << results.size() << "\n";
  if (!results.empty()) out << "best\t" << fmt(results.front().score) << "\n";
  return kOk;
}

int cmd_optimize_local(const OptimizeLocalConfig& config, std::ostream& out,
                       std::ostream& err) {
  if (config.tau < 0.0 || config.tau > 1.0) {
    throw ConfigError("tau must lie in [0, 1]");
  }
  if (config.iterations < 0) throw ConfigError("iterations must be >= 0");
  Mhg mhg = load_grammar(config.grammar);
  Corpus corpus = load_corpus(config.input);
  if (corpus.graphs.empty()) {
    err << "no usable molecules in '" << config.input << "'\n";
    return kUsage;
  }
  Oracle oracle = make_oracle(config.property, corpus.graphs);

  LocalOptions options;
  options.tau = config.tau;
  options.iterations = config.iterations;
  options.radius = config.radius;
  options.bits = config.bits;

  auto file = open_output(config.output);
  file << "input\tbest\timprovement\tsimilarity\tsuccess\n";
  Rng master(config.seed);
  int succeeded = 0;
  int failed = 0;
  for (std::size_t i = 0; i < corpus.graphs.size(); ++i) {
    options.seed = master.fork_seed();
    try {
      LocalResult result =
          local_optimize(corpus.graphs[i], mhg, oracle, options);
      if (result.success) {
        ++succeeded;
        file << corpus.smiles[i] << "\t" << write_smiles(*result.best) << "\t"
             << fmt(result.improvement) << "\t" << fmt(result.similarity)
             << "\t1\n";
      } else {
        file << corpus.smiles[i] << "\t-\t" << fmt(0.0) << "\t" << fmt(0.0)
             << "\t0\n";
      }
    } catch (const NotInLanguage&) {
      ++failed;
      file << corpus.smiles[i] << "\t-\t" << fmt(0.0) << "\t" << fmt(0.0)
           << "\t0\n";
      err << "not in language: " << corpus.smiles[i] << "\n";
    }
  }
  out << "inputs\t" << corpus.graphs.size() << "\n";
  out << "succeeded\t" << succeeded << "\n";
  return failed == 0 ? kOk : kPartial;
}

}  // namespace mhg::cli
