#include "s2d2/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace s2d2 {

void RoutingState::validate() const {
  if (tau_off > tau_on) throw std::invalid_argument("RoutingState: requires tau_off <= tau_on");
  if (cost_c < 0.0) throw std::invalid_argument("RoutingState: requires c >= 0");
  for (int b : bins)
    if (b < 1) throw std::invalid_argument("RoutingState: bin counts must be >= 1");
}

std::vector<double> acceptance_probs(const EstimatorSpec& est, const std::vector<Dist>& span_dists,
                                     const std::vector<double>& span_confs, Rng& rng) {
  if (span_dists.size() != span_confs.size())
    throw std::invalid_argument("acceptance_probs: dists/confs length mismatch");
  std::vector<double> alpha(span_dists.size());
  for (std::size_t i = 0; i < span_dists.size(); ++i) {
    switch (est.kind) {
      case EstimatorSpec::Kind::kRandom:
        alpha[i] = rng.next_double();
        break;
      case EstimatorSpec::Kind::kSoftEntropy:
        alpha[i] = std::exp(-est.beta * normalized_entropy(span_dists[i]));
        break;
      case EstimatorSpec::Kind::kConfPower:
        alpha[i] = std::pow(span_confs[i], est.gamma_conf);
        break;
      case EstimatorSpec::Kind::kRenyi2: {
        double s = 0.0;
        for (double p : span_dists[i].probs) s += p * p;
        alpha[i] = s;
        break;
      }
      case EstimatorSpec::Kind::kHardEntropy:
        alpha[i] = normalized_entropy(span_dists[i]) < est.tau_ent ? 1.0 : 0.0;
        break;
      case EstimatorSpec::Kind::kHardMargin:
        alpha[i] = top1_margin(span_dists[i]) >= est.tau_margin ? 1.0 : 0.0;
        break;
    }
  }
  return alpha;
}

double expected_prefix(const std::vector<double>& alpha) {
  double khat = 0.0;
  double run = 1.0;
  for (double a : alpha) {
    if (a < 0.0 || a > 1.0) throw std::invalid_argument("expected_prefix: alpha outside [0, 1]");
    run *= a;
    khat += run;
  }
  return khat;
}

double verify_score(double khat, const RoutingState& state, std::size_t n_hi) {
  if (state.score_mode == ScoreMode::kStatic) return khat - state.cost_c;
  return khat - state.cost_c * static_cast<double>(n_hi);
}

ContextBucket context_bucket(std::size_t span_len, std::size_t block_size, double block_progress,
                             double mean_entropy, const std::array<int, 3>& bins) {
  auto linear_bin = [](double x, int n) {
    if (n <= 1) return 0;
    int b = static_cast<int>(std::floor(x * n));
    return std::clamp(b, 0, n - 1);
  };
  // Span length partitioned linearly over [1, B].
  double span_frac = block_size > 1 ? static_cast<double>(span_len - 1) /
                                          static_cast<double>(block_size - 1)
                                    : 0.0;
  return {linear_bin(span_frac, bins[0]), linear_bin(block_progress, bins[1]),
          linear_bin(mean_entropy, bins[2])};
}

int bandit_select(RoutingState& state, const ContextBucket& bucket) {
  const double log_t = std::log(static_cast<double>(state.t));
  ++state.t;
  double best = -std::numeric_limits<double>::infinity();
  int best_action = 0;
  for (int a : {0, 1}) {  // ties resolve to action 1
    const auto it = state.bandit_stats.find({bucket, a});
    double value;
    if (it == state.bandit_stats.end() || it->second.count == 0) {
      value = std::numeric_limits<double>::infinity();
    } else {
      value = it->second.mean_reward +
              state.ucb_beta * std::sqrt(log_t / static_cast<double>(it->second.count));
    }
    if (value >= best) {
      best = value;
      best_action = a;
    }
  }
  return best_action;
}

void bandit_update(RoutingState& state, const ContextBucket& bucket, int action,
                   std::size_t decoded_this_step, bool verified) {
  const double time_cost = verified ? 2.0 : 1.0;
  const double r = static_cast<double>(decoded_this_step) / time_cost;
  BanditArm& arm = state.bandit_stats[{bucket, action}];
  ++arm.count;
  arm.mean_reward += (r - arm.mean_reward) / static_cast<double>(arm.count);
}

bool do_verify(RoutingState& state, const StepContext& ctx, std::optional<double> score,
               Rng& rng) {
  (void)rng;
  switch (state.policy) {
    case PolicyKind::kNever:
      return false;
    case PolicyKind::kMinSpan:
      return ctx.span_len >= state.tau_span;
    case PolicyKind::kScoreThreshold:
      if (!score) throw std::invalid_argument("do_verify: score required for score_threshold");
      return *score >= state.tau_score;
    case PolicyKind::kHysteresis: {
      if (!score) throw std::invalid_argument("do_verify: score required for hysteresis");
      if (state.hysteresis_on && *score < state.tau_off) {
        state.hysteresis_on = false;
      } else if (!state.hysteresis_on && *score >= state.tau_on) {
        state.hysteresis_on = true;
      }
      return state.hysteresis_on;
    }
    case PolicyKind::kBandit: {
      const ContextBucket bucket = context_bucket(ctx.span_len, ctx.block_size,
                                                   ctx.block_progress, ctx.mean_entropy, state.bins);
      const int action = bandit_select(state, bucket);
      state.pending_bandit_decision = {bucket, action};
      return action == 1;
    }
  }
  return false;
}

}  // namespace s2d2
