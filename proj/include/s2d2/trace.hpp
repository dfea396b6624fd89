#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "s2d2/core.hpp"

namespace s2d2 {

enum class StepMode { kDiffusion, kSpeculative, kSubs };

// One committed token. `pos` is block-relative; `conf` is the drafter
// probability of the committed token (verifier probability for resampled
// tokens).
struct CommitEvent {
  std::size_t pos = 0;
  double conf = 0.0;
  std::optional<double> verifier_conf;
  bool resampled = false;
};

struct StepRecord {
  std::size_t step_index = 0;
  std::size_t block_index = 0;
  StepMode mode = StepMode::kDiffusion;
  std::size_t span_len = 0;  // |C_t| at the start of the step
  bool verified = false;
  std::size_t accepted_count = 0;
  std::optional<std::size_t> rejected_at;
  std::vector<CommitEvent> commits;  // ascending block-relative positions
  std::optional<double> khat;
  std::optional<double> score;
  bool forced = false;  // step budget exhausted, leftover masks argmax-committed
  std::size_t nfe_after = 0;
};

struct DecodeTrace {
  std::size_t block_size = 0;
  std::vector<StepRecord> steps;
  std::size_t total_nfe = 0;
  std::size_t cache_passes = 0;
  std::size_t blocks = 0;
  std::size_t generated_tokens = 0;

  std::size_t sampler_steps() const { return steps.size(); }
  std::size_t verified_steps() const {
    std::size_t n = 0;
    for (const auto& s : steps) n += s.verified ? 1 : 0;
    return n;
  }
};

}  // namespace s2d2
