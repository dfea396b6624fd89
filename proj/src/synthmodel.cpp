#include "s2d2/synthmodel.hpp"

#include <algorithm>
#include <cmath>

namespace s2d2 {

namespace {

inline std::uint64_t fold(std::uint64_t h, std::uint64_t v) {
  return Rng::mix(h ^ Rng::mix(v + 0x94d049bb133111ebull));
}

inline double to_unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<Dist> forward(const ModelSpec& spec, const std::vector<TokenId>& prefix,
                          const std::vector<TokenId>& block, const AttnMask& mask,
                          const std::vector<std::size_t>& query_positions, ForwardMode mode) {
  spec.validate();
  if (mask.size() != block.size())
    throw DimensionMismatch("forward: mask size does not match block length");
  for (std::size_t q : query_positions)
    if (q >= block.size()) throw std::invalid_argument("forward: query position out of block");

  const std::size_t m = prefix.size();
  std::vector<Dist> out;
  out.reserve(query_positions.size());

  for (std::size_t q : query_positions) {
    const std::uint64_t abs_pos = static_cast<std::uint64_t>(m + q);

    // Context hash over the visible (position, token) pairs, in ascending
    // position order. Prefix keys are always visible.
    std::uint64_t ctx = fold(spec.seed, abs_pos);
    for (std::size_t j = 0; j < m; ++j) {
      ctx = fold(ctx, static_cast<std::uint64_t>(j) << 32 | prefix[j]);
    }
    for (std::size_t j = 0; j < block.size(); ++j) {
      if (!mask.at(q, j)) continue;
      ctx = fold(ctx, static_cast<std::uint64_t>(m + j) << 32 | block[j]);
    }

    std::vector<double> logits(spec.vocab_size, 0.0);
    double max_logit = -1e300;
    for (std::size_t v = 0; v < spec.vocab_size; ++v) {
      if (v == spec.mask_id()) continue;
      double score = spec.sharpness * to_unit(fold(ctx, 0xa076u ^ v));
      if (mode == ForwardMode::kVerify && spec.drift > 0.0) {
        score += spec.drift * (2.0 * to_unit(fold(ctx, 0xd31f7u ^ v)) - 1.0);
      }
      if (v == spec.eos_id()) score += spec.eos_bonus * static_cast<double>(abs_pos);
      logits[v] = score;
      max_logit = std::max(max_logit, score);
    }

    Dist d;
    d.probs.resize(spec.vocab_size, 0.0);
    double z = 0.0;
    for (std::size_t v = 0; v < spec.vocab_size; ++v) {
      if (v == spec.mask_id()) continue;
      d.probs[v] = std::exp(logits[v] - max_logit);
      z += d.probs[v];
    }
    for (double& p : d.probs) p /= z;
    out.push_back(std::move(d));
  }
  return out;
}

double subs_unmask_prob(const NoiseSchedule& schedule, double s, double t) {
  if (s >= t) throw InvalidRange("subs_unmask_prob: requires s < t");
  if (s < 0.0 || t > 1.0) throw InvalidRange("subs_unmask_prob: s, t must lie in [0, 1]");
  const double as = schedule.alpha(s);
  const double at = schedule.alpha(t);
  return (as - at) / (1.0 - at);
}

BlockState subs_step(const BlockState& block, const std::vector<Dist>& dists, double rho,
                     Rng& rng) {
  if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("subs_step: rho must lie in [0, 1]");
  const auto masked = block.masked_positions();
  if (dists.size() < masked.size())
    throw std::invalid_argument("subs_step: dists must cover all masked positions");

  BlockState next = block;
  for (std::size_t k = 0; k < masked.size(); ++k) {
    if (rng.next_double() < rho) next.tokens[masked[k]] = sample_dist(dists[k], rng);
  }
  return next;
}

TokenId sample_dist(const Dist& d, Rng& rng) {
  const double u = rng.next_double();
  double acc = 0.0;
  for (std::size_t v = 0; v < d.vocab_size(); ++v) {
    acc += d.probs[v];
    if (u < acc) return static_cast<TokenId>(v);
  }
  // Round-off spillover: return the last positive-probability token.
  for (std::size_t v = d.vocab_size(); v-- > 0;)
    if (d.probs[v] > 0.0) return static_cast<TokenId>(v);
  return 0;
}

}  // namespace s2d2
