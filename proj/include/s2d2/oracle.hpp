#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "s2d2/core.hpp"
#include "s2d2/rng.hpp"
#include "s2d2/synthmodel.hpp"

// Independent brute-force and Monte-Carlo references. Deliberately shares no
// implementation with the decode/routing modules beyond core types.
namespace s2d2::oracle {

struct TooLarge : std::runtime_error {
  TooLarge() : std::runtime_error("brute_force_expected_prefix: L must be <= 12") {}
};

// Enumerates all 2^L acceptance bit-vectors under independent Bernoulli(alpha_i)
// and returns the probability-weighted mean leading-ones count.
double brute_force_expected_prefix(const std::vector<double>& alpha);

struct CommittedTokenLaw {
  Dist empirical;
  double tv_distance = 0.0;  // total variation to the verifier distribution
};

// Repeatedly runs a length-1 accept/resample round and tallies the committed
// token; at gamma = 1 the law must match P_ver (speculative-sampling identity).
CommittedTokenLaw mc_committed_token_law(const Dist& p_draft, const Dist& p_ver, double gamma,
                                         std::size_t n_samples, Rng& rng);

struct EstimatorReport {
  double mean_error = 0.0;
  double std_error = 0.0;
  double mae = 0.0;
};

// Exact per-position acceptance probability sum_v min(p(v), q(v)) for the
// untempered ratio; the "perfect estimator" reference.
std::vector<double> exact_acceptance_probs(const std::vector<Dist>& p_draft,
                                           const std::vector<Dist>& p_ver);

struct EstimatorSampleSpec {
  EstimatorSampleSpec() = default;
  double beta = 1.0;
  double gamma_conf = 1.0;
  double tau_ent = 0.2;
  double tau_margin = 0.1;
};

enum class EstimatorKind {
  kRandom,
  kSoftEntropy,
  kConfPower,
  kRenyi2,
  kHardEntropy,
  kHardMargin,
  kExact,  // oracle-only: true acceptance probabilities
  kOnes,   // oracle-only: alpha = 1 everywhere
};

// Runs n_trials fully-verified steps on random synthetic contexts and compares
// the estimated K_hat against the realized accepted prefix length.
EstimatorReport estimator_error_report(EstimatorKind kind, const EstimatorSampleSpec& params,
                                       std::size_t n_trials, const ModelSpec& model,
                                       std::size_t block_size, std::uint64_t seed);

}  // namespace s2d2::oracle
