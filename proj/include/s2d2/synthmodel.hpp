#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "s2d2/core.hpp"
#include "s2d2/masks.hpp"
#include "s2d2/rng.hpp"

namespace s2d2 {

struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic synthetic model standing in for a pretrained block-diffusion
// network. `sharpness` controls how peaked the output distributions are;
// `drift` controls how far verifier-mode outputs diverge from drafter-mode
// outputs (drift = 0 makes the two modes coincide exactly).
struct ModelSpec {
  std::size_t vocab_size = 64;
  std::uint64_t seed = 0;
  double sharpness = 6.0;
  double drift = 0.0;
  double eos_bonus = 0.0;  // logit bonus per absolute position, terminates runs

  TokenId mask_id() const { return static_cast<TokenId>(vocab_size - 1); }
  TokenId eos_id() const { return static_cast<TokenId>(vocab_size - 2); }

  void validate() const {
    if (vocab_size < 4) throw std::invalid_argument("ModelSpec: vocab_size must be >= 4");
    if (sharpness <= 0.0) throw std::invalid_argument("ModelSpec: sharpness must be > 0");
    if (drift < 0.0) throw std::invalid_argument("ModelSpec: drift must be >= 0");
  }
};

enum class ForwardMode { kDraft, kVerify };

// One distribution per query position. Each output is a pure function of
// (seed, the query's absolute position, the multiset of (position, token)
// pairs visible to it under the mask and prefix); verifier mode additionally
// perturbs scores by `drift`. The MASK token never receives probability.
std::vector<Dist> forward(const ModelSpec& spec, const std::vector<TokenId>& prefix,
                          const std::vector<TokenId>& block, const AttnMask& mask,
                          const std::vector<std::size_t>& query_positions,
                          ForwardMode mode = ForwardMode::kDraft);

// Diffusion noise schedule. alpha is strictly decreasing with alpha(0) = 1
// and alpha(1) = 0.
struct NoiseSchedule {
  std::function<double(double)> alpha;

  static NoiseSchedule linear() {
    return NoiseSchedule{[](double t) { return 1.0 - t; }};
  }
};

// Per-position unmasking probability rho_{t->s} = (alpha_s - alpha_t) / (1 - alpha_t).
double subs_unmask_prob(const NoiseSchedule& schedule, double s, double t);

// Independently unmask each masked position with probability rho, sampling the
// revealed token from that position's distribution. `dists[k]` corresponds to
// the k-th masked position in ascending order. Never re-masks a token.
BlockState subs_step(const BlockState& block, const std::vector<Dist>& dists, double rho,
                     Rng& rng);

// Inverse-CDF sample; shared primitive for all samplers.
TokenId sample_dist(const Dist& d, Rng& rng);

}  // namespace s2d2
