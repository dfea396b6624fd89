#include "s2d2/decode.hpp"

#include <algorithm>
#include <cmath>

#include "s2d2/masks.hpp"

namespace s2d2 {

namespace {

// One draft forward plus per-position sampling, shared by all samplers.
struct DraftStep {
  std::vector<std::size_t> masked;  // ascending
  std::vector<Dist> dists;          // one per masked position
  std::vector<TokenId> sampled;
  std::vector<double> confs;  // probability of the sampled token
};

AttnMask drafting_mask(const DecodeConfig& cfg, const BlockState& block) {
  if (cfg.draft_mask_mode == DraftMaskMode::kAr) {
    std::size_t j = block.block_size();
    for (std::size_t i = 0; i < block.tokens.size(); ++i) {
      if (block.tokens[i] == block.mask_id) {
        j = i;
        break;
      }
    }
    return draft_mask(block.block_size(), j);
  }
  return block_full_mask(block.block_size());
}

std::size_t argmax_token(const Dist& d) {
  std::size_t best = 0;
  for (std::size_t v = 1; v < d.vocab_size(); ++v)
    if (d.probs[v] > d.probs[best]) best = v;  // ties keep the lowest index
  return best;
}

DraftStep run_draft(const ModelSpec& model, const BlockState& block, const DecodeConfig& cfg,
                    Rng& rng, DecodeTrace& trace) {
  DraftStep step;
  step.masked = block.masked_positions();
  const AttnMask mask = drafting_mask(cfg, block);
  step.dists = forward(model, block.committed_prefix, block.tokens, mask, step.masked,
                       ForwardMode::kDraft);
  ++trace.total_nfe;

  step.sampled.resize(step.masked.size());
  step.confs.resize(step.masked.size());
  for (std::size_t k = 0; k < step.masked.size(); ++k) {
    const TokenId tok = cfg.greedy ? static_cast<TokenId>(argmax_token(step.dists[k]))
                                   : sample_dist(step.dists[k], rng);
    step.sampled[k] = tok;
    step.confs[k] = step.dists[k].probs[tok];
  }
  return step;
}

// S_t = {i in M_t : p_i > tau} plus the most confident position.
void threshold_commit(BlockState& block, const DraftStep& step, double tau, StepRecord& rec) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < step.masked.size(); ++k)
    if (step.confs[k] > step.confs[best]) best = k;  // ties keep the lowest index

  for (std::size_t k = 0; k < step.masked.size(); ++k) {
    if (step.confs[k] > tau || k == best) {
      block.tokens[step.masked[k]] = step.sampled[k];
      rec.commits.push_back({step.masked[k], step.confs[k], std::nullopt, false});
    }
  }
}

// Step budget exhausted: argmax-commit every leftover mask from the last
// draft distributions and flag the record.
void force_commit(BlockState& block, const DraftStep& last, StepRecord& rec) {
  for (std::size_t k = 0; k < last.masked.size(); ++k) {
    const std::size_t pos = last.masked[k];
    if (block.tokens[pos] != block.mask_id) continue;
    const std::size_t tok = argmax_token(last.dists[k]);
    block.tokens[pos] = static_cast<TokenId>(tok);
    rec.commits.push_back({pos, last.dists[k].probs[tok], std::nullopt, false});
  }
  std::sort(rec.commits.begin(), rec.commits.end(),
            [](const CommitEvent& a, const CommitEvent& b) { return a.pos < b.pos; });
  rec.forced = true;
}

}  // namespace

double accept_prob(double p, double q, double gamma) {
  if (p <= 0.0) throw DraftProbZero();
  if (q >= p) return 1.0;
  return std::pow(q / p, gamma);
}

Dist residual_dist(const Dist& p_ver, const Dist& p_draft) {
  std::vector<double> residual(p_ver.vocab_size());
  double sum = 0.0;
  for (std::size_t v = 0; v < p_ver.vocab_size(); ++v) {
    residual[v] = std::max(0.0, p_ver.probs[v] - p_draft.probs[v]);
    sum += residual[v];
  }
  if (sum <= 0.0) return p_ver;  // matched distributions
  for (double& r : residual) r /= sum;
  return Dist{std::move(residual)};
}

SpanVerdict speculative_accept(const std::vector<TokenId>& span_tokens,
                               const std::vector<Dist>& p_draft, const std::vector<Dist>& p_ver,
                               double gamma, Rng& rng) {
  if (span_tokens.empty() || span_tokens.size() != p_draft.size() ||
      span_tokens.size() != p_ver.size())
    throw std::invalid_argument("speculative_accept: span vectors must have equal length >= 1");

  SpanVerdict verdict;
  for (std::size_t i = 0; i < span_tokens.size(); ++i) {
    const double p = p_draft[i].probs[span_tokens[i]];
    const double q = p_ver[i].probs[span_tokens[i]];
    const double r = rng.next_double();
    if (r < accept_prob(p, q, gamma)) {
      ++verdict.accepted_count;
    } else {
      verdict.rejected_at = i;
      verdict.resampled_token = sample_dist(residual_dist(p_ver[i], p_draft[i]), rng);
      break;
    }
  }
  return verdict;
}

BlockState sample_block_bd3(const ModelSpec& model, BlockState block, const DecodeConfig& cfg,
                            Rng& rng, DecodeTrace& trace, std::size_t block_index) {
  cfg.validate();
  const double tau = cfg.effective_tau();
  for (std::size_t t = 0; t < cfg.max_steps; ++t) {
    if (block.masked_positions().empty()) break;
    DraftStep step = run_draft(model, block, cfg, rng, trace);

    StepRecord rec;
    rec.step_index = trace.steps.size();
    rec.block_index = block_index;
    rec.mode = StepMode::kDiffusion;
    rec.span_len = first_contiguous_span(step.masked).size();
    threshold_commit(block, step, tau, rec);
    if (t + 1 == cfg.max_steps && !block.masked_positions().empty())
      force_commit(block, step, rec);
    rec.nfe_after = trace.total_nfe;
    trace.steps.push_back(std::move(rec));
  }
  return block;
}

BlockState sample_block_s2d2(const ModelSpec& model, BlockState block, const DecodeConfig& cfg,
                             RoutingState& policy, Rng& rng, DecodeTrace& trace,
                             std::size_t block_index) {
  cfg.validate();
  policy.validate();
  const double tau = cfg.effective_tau();
  const std::size_t B = block.block_size();

  for (std::size_t t = 0; t < cfg.max_steps; ++t) {
    if (block.masked_positions().empty()) break;
    DraftStep step = run_draft(model, block, cfg, rng, trace);
    const IndexRange span = first_contiguous_span(step.masked);

    StepRecord rec;
    rec.step_index = trace.steps.size();
    rec.block_index = block_index;
    rec.mode = StepMode::kDiffusion;
    rec.span_len = span.size();

    StepContext ctx;
    ctx.span_len = span.size();
    ctx.block_size = B;
    ctx.block_progress = static_cast<double>(B - step.masked.size()) / static_cast<double>(B);

    const bool needs_score =
        policy.policy == PolicyKind::kScoreThreshold || policy.policy == PolicyKind::kHysteresis;
    std::optional<double> score;
    if (needs_score || policy.policy == PolicyKind::kBandit) {
      std::vector<Dist> span_dists(step.dists.begin(), step.dists.begin() + span.size());
      double ent = 0.0;
      for (const Dist& d : span_dists) ent += normalized_entropy(d);
      ctx.mean_entropy = span.size() > 0 ? ent / static_cast<double>(span.size()) : 0.0;

      if (needs_score) {
        std::vector<double> span_confs(step.confs.begin(), step.confs.begin() + span.size());
        const auto alpha = acceptance_probs(cfg.estimator, span_dists, span_confs, rng);
        const double khat = expected_prefix(alpha);
        std::size_t n_hi = 0;
        for (double c : step.confs) n_hi += c > tau ? 1 : 0;
        score = verify_score(khat, policy, n_hi);
        rec.khat = khat;
        rec.score = score;
      }
    }

    const bool verify = do_verify(policy, ctx, score, rng);
    if (verify) {
      rec.mode = StepMode::kSpeculative;
      rec.verified = true;

      const std::vector<TokenId> span_tokens(step.sampled.begin(),
                                             step.sampled.begin() + span.size());
      const std::vector<Dist> p_draft(step.dists.begin(), step.dists.begin() + span.size());
      const std::vector<std::size_t> span_pos(step.masked.begin(),
                                              step.masked.begin() + span.size());
      // The verifier re-scores the span in block-size-1 mode; drift is the
      // drafter-vs-verifier gap.
      const std::vector<Dist> p_ver = forward(model, block.committed_prefix, block.tokens,
                                              drafting_mask(cfg, block), span_pos,
                                              ForwardMode::kVerify);
      ++trace.total_nfe;

      const SpanVerdict verdict =
          speculative_accept(span_tokens, p_draft, p_ver, cfg.temper_gamma, rng);
      rec.accepted_count = verdict.accepted_count;
      rec.rejected_at = verdict.rejected_at;

      for (std::size_t i = 0; i < verdict.accepted_count; ++i) {
        block.tokens[span_pos[i]] = span_tokens[i];
        rec.commits.push_back({span_pos[i], p_draft[i].probs[span_tokens[i]],
                               p_ver[i].probs[span_tokens[i]], false});
      }
      if (verdict.rejected_at) {
        const std::size_t i = *verdict.rejected_at;
        const TokenId tok = *verdict.resampled_token;
        const double q = p_ver[i].probs[tok];
        block.tokens[span_pos[i]] = tok;
        rec.commits.push_back({span_pos[i], q, q, true});
      }
    } else {
      threshold_commit(block, step, tau, rec);
    }

    if (policy.pending_bandit_decision) {
      const auto [bucket, action] = *policy.pending_bandit_decision;
      bandit_update(policy, bucket, action, rec.commits.size(), verify);
      policy.pending_bandit_decision.reset();
    }

    if (t + 1 == cfg.max_steps && !block.masked_positions().empty())
      force_commit(block, step, rec);
    rec.nfe_after = trace.total_nfe;
    trace.steps.push_back(std::move(rec));
  }
  return block;
}

BlockState sample_block_subs(const ModelSpec& model, BlockState block, const DecodeConfig& cfg,
                             const NoiseSchedule& schedule, Rng& rng, DecodeTrace& trace,
                             std::size_t block_index) {
  cfg.validate();
  const std::size_t T = cfg.max_steps;
  for (std::size_t k = 1; k <= T; ++k) {
    if (block.masked_positions().empty()) break;
    const double t_hi = 1.0 - static_cast<double>(k - 1) / static_cast<double>(T);
    const double t_lo = 1.0 - static_cast<double>(k) / static_cast<double>(T);
    const double rho = subs_unmask_prob(schedule, t_lo, t_hi);

    const auto masked = block.masked_positions();
    const auto dists = forward(model, block.committed_prefix, block.tokens,
                               block_full_mask(block.block_size()), masked, ForwardMode::kDraft);
    ++trace.total_nfe;

    StepRecord rec;
    rec.step_index = trace.steps.size();
    rec.block_index = block_index;
    rec.mode = StepMode::kSubs;
    rec.span_len = first_contiguous_span(masked).size();

    const BlockState next = subs_step(block, dists, rho, rng);
    for (std::size_t i = 0; i < masked.size(); ++i) {
      const std::size_t pos = masked[i];
      if (next.tokens[pos] != block.mask_id)
        rec.commits.push_back({pos, dists[i].probs[next.tokens[pos]], std::nullopt, false});
    }
    block = next;
    rec.nfe_after = trace.total_nfe;
    trace.steps.push_back(std::move(rec));
  }
  return block;
}

std::pair<std::vector<TokenId>, DecodeTrace> decode_sequence(const ModelSpec& model,
                                                             const std::vector<TokenId>& prompt,
                                                             const DecodeConfig& cfg,
                                                             Sampler sampler, RoutingState& policy,
                                                             Rng& rng) {
  cfg.validate();
  if (prompt.empty()) throw std::invalid_argument("decode_sequence: prompt must be non-empty");

  DecodeTrace trace;
  trace.block_size = cfg.block_size;
  std::vector<TokenId> x = prompt;
  const NoiseSchedule schedule = NoiseSchedule::linear();

  std::size_t generated = 0;
  bool finished = false;
  while (!finished && generated < cfg.max_new_tokens) {
    BlockState block;
    block.mask_id = model.mask_id();
    block.tokens.assign(cfg.block_size, model.mask_id());
    block.committed_prefix = x;

    switch (sampler) {
      case Sampler::kBd3:
        block = sample_block_bd3(model, std::move(block), cfg, rng, trace, trace.blocks);
        break;
      case Sampler::kS2d2:
        block = sample_block_s2d2(model, std::move(block), cfg, policy, rng, trace, trace.blocks);
        break;
      case Sampler::kSubs:
        block = sample_block_subs(model, std::move(block), cfg, schedule, rng, trace,
                                  trace.blocks);
        break;
    }

    // Cache-update forward: builds the block's KV entries, one NFE per block.
    const AttnMask cache_mask = cfg.cache_mode == CacheMode::kAr
                                    ? draft_mask(cfg.block_size, cfg.block_size)
                                    : block_full_mask(cfg.block_size);
    forward(model, x, block.tokens, cache_mask, {0}, ForwardMode::kDraft);
    ++trace.total_nfe;
    ++trace.cache_passes;
    ++trace.blocks;

    for (std::size_t i = 0; i < block.tokens.size(); ++i) {
      x.push_back(block.tokens[i]);
      ++generated;
      if (block.tokens[i] == model.eos_id()) {
        finished = true;
        break;
      }
    }
  }

  if (generated > cfg.max_new_tokens) x.resize(prompt.size() + cfg.max_new_tokens);
  for (const auto& s : trace.steps) trace.generated_tokens += s.commits.size();
  return {std::move(x), std::move(trace)};
}

}  // namespace s2d2
