#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "s2d2/config.hpp"
#include "s2d2/decode.hpp"
#include "s2d2/trace.hpp"

namespace s2d2::cli {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

// Everything a single decode run needs, assembled from a validated Config.
struct RunSetup {
  ModelSpec model;
  DecodeConfig decode;
  RoutingState policy;
  Sampler sampler = Sampler::kBd3;
  std::vector<std::vector<TokenId>> prompts;
  std::uint64_t seed = 0;
  std::size_t num_sequences = 1;
  std::size_t arness_k = 2;
  bool bandit_persist = true;
};

RunSetup build_setup(const Config& cfg);

// Summary columns, all derivable from the step records.
struct TraceSummary {
  std::size_t tokens = 0;
  std::size_t nfe = 0;
  double tokens_per_nfe = 0.0;
  double verify_rate = 0.0;
  double mean_accepted_prefix = 0.0;
  double rejection_rate = 0.0;
  double local_arness = 0.0;
  double global_arness = 0.0;
};

TraceSummary summarize(const DecodeTrace& trace, std::size_t arness_k);

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed_override;
  unsigned jobs = 1;
};

int cmd_decode(const CommonOptions& opts);
int cmd_sweep(const CommonOptions& opts);

struct VerifyDistOptions {
  std::size_t vocab = 8;
  std::size_t n_pairs = 20;
  std::size_t n_samples = 200000;
  double gamma = 1.0;
  std::uint64_t seed = 1;
  double tolerance = 0.01;
  bool assert_tolerance = true;
};

int cmd_verify_dist(const VerifyDistOptions& opts);

struct OracleKhatOptions {
  std::size_t n_vectors = 1000;
  std::uint64_t seed = 1;
  double tolerance = 1e-12;
};

int cmd_oracle_khat(const OracleKhatOptions& opts);

}  // namespace s2d2::cli
