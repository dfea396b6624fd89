#include "s2d2/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "s2d2/masks.hpp"

namespace s2d2::oracle {

namespace {

// Local inverse-CDF sampler; the oracle keeps its own sampling path.
std::size_t draw_from(const std::vector<double>& probs, Rng& rng) {
  const double u = rng.next_double();
  double acc = 0.0;
  for (std::size_t v = 0; v < probs.size(); ++v) {
    acc += probs[v];
    if (u < acc) return v;
  }
  for (std::size_t v = probs.size(); v-- > 0;)
    if (probs[v] > 0.0) return v;
  return 0;
}

std::vector<double> residual_probs(const Dist& p_ver, const Dist& p_draft) {
  std::vector<double> res(p_ver.vocab_size());
  double sum = 0.0;
  for (std::size_t v = 0; v < res.size(); ++v) {
    res[v] = std::max(0.0, p_ver.probs[v] - p_draft.probs[v]);
    sum += res[v];
  }
  if (sum <= 0.0) return p_ver.probs;
  for (double& r : res) r /= sum;
  return res;
}

double entropy_normalized(const Dist& d) {
  double h = 0.0;
  for (double p : d.probs)
    if (p > 0.0) h -= p * std::log(p);
  return h / std::log(static_cast<double>(d.vocab_size()));
}

double margin(const Dist& d) {
  double top1 = -1.0, top2 = -1.0;
  for (double p : d.probs) {
    if (p > top1) {
      top2 = top1;
      top1 = p;
    } else if (p > top2) {
      top2 = p;
    }
  }
  return top1 - top2;
}

}  // namespace

double brute_force_expected_prefix(const std::vector<double>& alpha) {
  const std::size_t L = alpha.size();
  if (L > 12) throw TooLarge();
  double expectation = 0.0;
  for (std::size_t bits = 0; bits < (std::size_t{1} << L); ++bits) {
    double prob = 1.0;
    std::size_t prefix = 0;
    bool still_leading = true;
    for (std::size_t i = 0; i < L; ++i) {
      const bool accepted = (bits >> i) & 1;
      prob *= accepted ? alpha[i] : 1.0 - alpha[i];
      if (still_leading && accepted)
        ++prefix;
      else
        still_leading = false;
    }
    expectation += prob * static_cast<double>(prefix);
  }
  return expectation;
}

CommittedTokenLaw mc_committed_token_law(const Dist& p_draft, const Dist& p_ver, double gamma,
                                         std::size_t n_samples, Rng& rng) {
  if (p_draft.vocab_size() != p_ver.vocab_size())
    throw std::invalid_argument("mc_committed_token_law: vocab mismatch");
  std::vector<std::size_t> tally(p_ver.vocab_size(), 0);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const std::size_t tok = draw_from(p_draft.probs, rng);
    const double p = p_draft.probs[tok];
    const double q = p_ver.probs[tok];
    const double a = p > 0.0 ? std::min(1.0, std::pow(q / p, gamma)) : 0.0;
    if (rng.next_double() < a) {
      ++tally[tok];
    } else {
      ++tally[draw_from(residual_probs(p_ver, p_draft), rng)];
    }
  }
  CommittedTokenLaw law;
  law.empirical.probs.resize(tally.size());
  for (std::size_t v = 0; v < tally.size(); ++v) {
    law.empirical.probs[v] = static_cast<double>(tally[v]) / static_cast<double>(n_samples);
    law.tv_distance += std::abs(law.empirical.probs[v] - p_ver.probs[v]);
  }
  law.tv_distance *= 0.5;
  return law;
}

std::vector<double> exact_acceptance_probs(const std::vector<Dist>& p_draft,
                                           const std::vector<Dist>& p_ver) {
  std::vector<double> alpha(p_draft.size());
  for (std::size_t i = 0; i < p_draft.size(); ++i) {
    double a = 0.0;
    for (std::size_t v = 0; v < p_draft[i].vocab_size(); ++v)
      a += std::min(p_draft[i].probs[v], p_ver[i].probs[v]);
    alpha[i] = a;
  }
  return alpha;
}

EstimatorReport estimator_error_report(EstimatorKind kind, const EstimatorSampleSpec& params,
                                       std::size_t n_trials, const ModelSpec& model,
                                       std::size_t block_size, std::uint64_t seed) {
  if (n_trials < 1) throw std::invalid_argument("estimator_error_report: n_trials must be >= 1");
  Rng rng = Rng::derive(seed, {0xe5u});

  double sum_err = 0.0, sum_sq = 0.0, sum_abs = 0.0;
  for (std::size_t trial = 0; trial < n_trials; ++trial) {
    // Fresh random context: short committed prefix, fully masked block.
    std::vector<TokenId> prefix(2 + rng.next_u64() % 8);
    for (auto& t : prefix)
      t = static_cast<TokenId>(rng.next_u64() % (model.vocab_size - 2));
    std::vector<TokenId> block(block_size, model.mask_id());
    std::vector<std::size_t> positions(block_size);
    for (std::size_t i = 0; i < block_size; ++i) positions[i] = i;

    const AttnMask mask = block_full_mask(block_size);
    const auto p_draft = forward(model, prefix, block, mask, positions, ForwardMode::kDraft);
    const auto p_ver = forward(model, prefix, block, mask, positions, ForwardMode::kVerify);

    std::vector<std::size_t> tokens(block_size);
    std::vector<double> confs(block_size);
    for (std::size_t i = 0; i < block_size; ++i) {
      tokens[i] = draw_from(p_draft[i].probs, rng);
      confs[i] = p_draft[i].probs[tokens[i]];
    }

    std::vector<double> alpha(block_size);
    for (std::size_t i = 0; i < block_size; ++i) {
      switch (kind) {
        case EstimatorKind::kRandom:
          alpha[i] = rng.next_double();
          break;
        case EstimatorKind::kSoftEntropy:
          alpha[i] = std::exp(-params.beta * entropy_normalized(p_draft[i]));
          break;
        case EstimatorKind::kConfPower:
          alpha[i] = std::pow(confs[i], params.gamma_conf);
          break;
        case EstimatorKind::kRenyi2: {
          double s = 0.0;
          for (double p : p_draft[i].probs) s += p * p;
          alpha[i] = s;
          break;
        }
        case EstimatorKind::kHardEntropy:
          alpha[i] = entropy_normalized(p_draft[i]) < params.tau_ent ? 1.0 : 0.0;
          break;
        case EstimatorKind::kHardMargin:
          alpha[i] = margin(p_draft[i]) >= params.tau_margin ? 1.0 : 0.0;
          break;
        case EstimatorKind::kExact: {
          double a = 0.0;
          for (std::size_t v = 0; v < p_draft[i].vocab_size(); ++v)
            a += std::min(p_draft[i].probs[v], p_ver[i].probs[v]);
          alpha[i] = a;
          break;
        }
        case EstimatorKind::kOnes:
          alpha[i] = 1.0;
          break;
      }
    }
    double khat = 0.0, run = 1.0;
    for (double a : alpha) {
      run *= a;
      khat += run;
    }

    // Realized accepted prefix under the untempered ratio.
    std::size_t accepted = 0;
    for (std::size_t i = 0; i < block_size; ++i) {
      const double p = confs[i];
      const double q = p_ver[i].probs[tokens[i]];
      if (rng.next_double() < std::min(1.0, q / p))
        ++accepted;
      else
        break;
    }

    const double err = khat - static_cast<double>(accepted);
    sum_err += err;
    sum_sq += err * err;
    sum_abs += std::abs(err);
  }

  EstimatorReport report;
  const double n = static_cast<double>(n_trials);
  report.mean_error = sum_err / n;
  report.std_error = std::sqrt(std::max(0.0, sum_sq / n - report.mean_error * report.mean_error));
  report.mae = sum_abs / n;
  return report;
}

}  // namespace s2d2::oracle
