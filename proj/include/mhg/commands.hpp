#ifndef MHG_COMMANDS_HPP
#define MHG_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace mhg::cli {

// Exit codes shared by all commands: 0 success, 1 partial (some molecules
// failed, report written), 2 usage/config/IO error.
inline constexpr int kOk = 0;
inline constexpr int kPartial = 1;
inline constexpr int kUsage = 2;

struct PropertyConfig {
  std::string name = "penalized_logp_std";  // or penalized_logp_raw
  std::string command;  // external oracle: SMILES on stdin, score on stdout
};

struct InferConfig {
  std::string input;
  std::string grammar_out;
  std::string sequences_out;  // optional
  std::string report_out;     // optional
};

struct EncodeConfig {
  std::string grammar;
  std::string input;
  std::string output;
};

struct DecodeConfig {
  std::string grammar;
  std::string input;
  std::string output;
};

struct SampleConfig {
  std::string grammar;
  std::string output;  // "-" writes molecules to the out stream
  int count = 10;
  std::uint64_t seed = 0;
  int max_expansions = 500;
};

struct RoundtripConfig {
  std::string grammar;
  std::string input;
  std::string report_out;  // optional per-molecule TSV
};

struct StatsConfig {
  std::string grammar;
  std::string train;
  std::string heldout;  // optional
  std::string output;   // optional full TSV including rule frequencies
};

struct OptimizeGlobalConfig {
  std::string grammar;
  std::string corpus;
  std::string output;
  PropertyConfig property;
  int rounds = 5;
  int per_round = 50;
  int pca_dim = 40;
  std::uint64_t seed = 0;
  int pool_samples = 100;
  int pool_mutations_per_top = 10;
  int top_for_mutation = 10;
  int max_expansions = 500;
};

struct OptimizeLocalConfig {
  std::string grammar;
  std::string input;
  std::string output;
  PropertyConfig property{"penalized_logp_raw", ""};
  double tau = 0.4;
  int iterations = 80;
  std::uint64_t seed = 0;
  int radius = 2;
  int bits = 2048;
};

int cmd_infer(const InferConfig& config, std::ostream& out, std::ostream& err);
int cmd_encode(const EncodeConfig& config, std::ostream& out, std::ostream& err);
int cmd_decode(const DecodeConfig& config, std::ostream& out, std::ostream& err);
int cmd_sample(const SampleConfig& config, std::ostream& out, std::ostream& err);
int cmd_roundtrip(const RoundtripConfig& config, std::ostream& out,
                  std::ostream& err);
int cmd_stats(const StatsConfig& config, std::ostream& out, std::ostream& err);
int cmd_optimize_global(const OptimizeGlobalConfig& config, std::ostream& out,
                        std::ostream& err);
int cmd_optimize_local(const OptimizeLocalConfig& config, std::ostream& out,
                       std::ostream& err);

// Seed resolution: explicit flag, else the MHG_SEED environment variable.
std::optional<std::uint64_t> seed_from_env();

}  // namespace mhg::cli

#endif  // MHG_COMMANDS_HPP
