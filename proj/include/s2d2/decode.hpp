#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "s2d2/core.hpp"
#include "s2d2/routing.hpp"
#include "s2d2/rng.hpp"
#include "s2d2/synthmodel.hpp"
#include "s2d2/trace.hpp"

namespace s2d2 {

struct DraftProbZero : std::runtime_error {
  DraftProbZero() : std::runtime_error("accept_prob: draft probability is zero") {}
};

enum class Sampler { kBd3, kS2d2, kSubs };
enum class Schedule { kStatic, kDynamic, kSubs };
enum class DraftMaskMode { kBlock, kAr };
enum class CacheMode { kBlock, kAr };
enum class VerifierView { kPositionAligned, kRightShifted };

struct DecodeConfig {
  std::size_t block_size = 8;
  std::size_t max_steps = 64;
  double conf_threshold = 0.9;
  double temper_gamma = 1.0;
  Schedule schedule = Schedule::kDynamic;
  DraftMaskMode draft_mask_mode = DraftMaskMode::kBlock;
  CacheMode cache_mode = CacheMode::kBlock;
  VerifierView verifier_view = VerifierView::kPositionAligned;
  std::size_t max_new_tokens = 64;
  bool greedy = false;
  EstimatorSpec estimator;

  // Static scheduling commits one token per step, which is the tau = 1 limit.
  double effective_tau() const { return schedule == Schedule::kStatic ? 1.0 : conf_threshold; }

  void validate() const {
    if (block_size < 1) throw std::invalid_argument("DecodeConfig: block_size must be >= 1");
    if (max_steps < 1) throw std::invalid_argument("DecodeConfig: max_steps must be >= 1");
    if (conf_threshold <= 0.0 || conf_threshold > 1.0)
      throw std::invalid_argument("DecodeConfig: conf_threshold must lie in (0, 1]");
    if (temper_gamma <= 0.0) throw std::invalid_argument("DecodeConfig: temper_gamma must be > 0");
  }
};

// Outcome of one speculative scan over a span.
struct SpanVerdict {
  std::size_t accepted_count = 0;
  std::optional<std::size_t> rejected_at;
  std::optional<TokenId> resampled_token;
};

// min(1, (q/p)^gamma). Throws DraftProbZero when p = 0.
double accept_prob(double p, double q, double gamma);

// Renormalized positive part of (P_ver - P_draft); falls back to P_ver when
// the positive part vanishes.
Dist residual_dist(const Dist& p_ver, const Dist& p_draft);

// Left-to-right rejection-sampling scan; stops at the first rejection and
// draws the replacement token from the residual distribution.
SpanVerdict speculative_accept(const std::vector<TokenId>& span_tokens,
                               const std::vector<Dist>& p_draft, const std::vector<Dist>& p_ver,
                               double gamma, Rng& rng);

// Confidence-thresholded block sampler: commits every masked position whose
// sampled-token probability exceeds tau, plus the most confident one.
BlockState sample_block_bd3(const ModelSpec& model, BlockState block, const DecodeConfig& cfg,
                            Rng& rng, DecodeTrace& trace, std::size_t block_index);

// Self-speculative block sampler: routes each step between verifier-backed
// speculative acceptance on the first contiguous masked span and the
// thresholded fallback.
BlockState sample_block_s2d2(const ModelSpec& model, BlockState block, const DecodeConfig& cfg,
                             RoutingState& policy, Rng& rng, DecodeTrace& trace,
                             std::size_t block_index);

// Posterior sampler: independent per-position unmasking over max_steps levels.
BlockState sample_block_subs(const ModelSpec& model, BlockState block, const DecodeConfig& cfg,
                             const NoiseSchedule& schedule, Rng& rng, DecodeTrace& trace,
                             std::size_t block_index);

// Block-wise autoregressive outer loop: repeatedly sample a fresh masked
// block, run the chosen sampler, then one cache-update forward per block.
// Stops at EOS or max_new_tokens.
std::pair<std::vector<TokenId>, DecodeTrace> decode_sequence(const ModelSpec& model,
                                                             const std::vector<TokenId>& prompt,
                                                             const DecodeConfig& cfg,
                                                             Sampler sampler, RoutingState& policy,
                                                             Rng& rng);

}  // namespace s2d2
