#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "s2d2/core.hpp"
#include "s2d2/rng.hpp"

namespace s2d2 {

// Per-position acceptance-probability estimator for the expected accepted
// prefix length.
struct EstimatorSpec {
  enum class Kind { kRandom, kSoftEntropy, kConfPower, kRenyi2, kHardEntropy, kHardMargin };

  Kind kind = Kind::kSoftEntropy;
  double beta = 1.0;        // soft_entropy
  double gamma_conf = 1.0;  // conf_power
  double tau_ent = 0.2;     // hard_entropy
  double tau_margin = 0.1;  // hard_margin
};

enum class PolicyKind { kNever, kMinSpan, kScoreThreshold, kHysteresis, kBandit };
enum class ScoreMode { kStatic, kDynamic };

using ContextBucket = std::array<int, 3>;

struct BanditArm {
  std::uint64_t count = 0;
  double mean_reward = 0.0;
};

// Verification-routing policy parameters plus mutable state (hysteresis bit,
// bandit statistics, decision counter). Owned by a single decode run.
struct RoutingState {
  PolicyKind policy = PolicyKind::kNever;
  std::size_t tau_span = 1;
  double tau_score = 0.0;
  double tau_on = 1.0;
  double tau_off = -5.0;
  ScoreMode score_mode = ScoreMode::kStatic;
  double cost_c = 1.0;
  double ucb_beta = 0.5;
  std::array<int, 3> bins = {2, 2, 2};

  bool hysteresis_on = false;
  std::map<std::pair<ContextBucket, int>, BanditArm> bandit_stats;
  std::uint64_t t = 1;

  // Filled by do_verify under the bandit policy so the caller can report
  // the step's reward.
  std::optional<std::pair<ContextBucket, int>> pending_bandit_decision;

  void validate() const;
};

// Inputs the score-based and bandit policies need about the current step.
struct StepContext {
  std::size_t span_len = 0;
  std::size_t block_size = 1;
  double block_progress = 0.0;  // fraction of unmasked tokens in the block
  double mean_entropy = 0.0;    // mean normalized entropy over the span
};

// alpha_i per estimator kind; every output lies in [0, 1].
std::vector<double> acceptance_probs(const EstimatorSpec& est, const std::vector<Dist>& span_dists,
                                     const std::vector<double>& span_confs, Rng& rng);

// K_hat = sum_{k=1..L} prod_{i=1..k} alpha_i.
double expected_prefix(const std::vector<double>& alpha);

// static: K_hat - c; dynamic: K_hat - c * N_hi.
double verify_score(double khat, const RoutingState& state, std::size_t n_hi);

ContextBucket context_bucket(std::size_t span_len, std::size_t block_size, double block_progress,
                             double mean_entropy, const std::array<int, 3>& bins);

// UCB action selection over {0: skip, 1: verify}; increments the decision
// counter. Untried arms have infinite bonus; ties prefer action 1.
int bandit_select(RoutingState& state, const ContextBucket& bucket);

// Incremental running-mean update with r = decoded_this_step / time_cost,
// time_cost = 2 when verification was invoked, 1 otherwise.
void bandit_update(RoutingState& state, const ContextBucket& bucket, int action,
                   std::size_t decoded_this_step, bool verified);

// Routing decision for the current step, mutating hysteresis/bandit state.
// `score` is required for the score-based policies.
bool do_verify(RoutingState& state, const StepContext& ctx, std::optional<double> score, Rng& rng);

}  // namespace s2d2
