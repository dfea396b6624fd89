#include "s2d2/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace s2d2 {

double nfe_speedup(const DecodeTrace& trace, const DecodeTrace& baseline) {
  if (trace.total_nfe == 0 || trace.generated_tokens == 0) throw ZeroNfe();
  if (baseline.total_nfe == 0 || baseline.generated_tokens == 0) throw ZeroNfe();
  const double method = static_cast<double>(trace.total_nfe) /
                        static_cast<double>(trace.generated_tokens);
  const double base = static_cast<double>(baseline.total_nfe) /
                      static_cast<double>(baseline.generated_tokens);
  return base / method;
}

double local_arness_at_k(const DecodeTrace& trace, std::size_t k) {
  if (k < 1) throw std::invalid_argument("local_arness_at_k: k must be >= 1");
  const long long B = static_cast<long long>(trace.block_size);
  std::size_t hits = 0, total = 0;
  long long prev = -1;
  std::size_t cur_block = static_cast<std::size_t>(-1);
  for (const auto& step : trace.steps) {
    if (step.block_index != cur_block) {
      cur_block = step.block_index;
      prev = -1;  // first event in a block compares against block start
    }
    for (const auto& ev : step.commits) {
      long long delta = (static_cast<long long>(ev.pos) - prev) % B;
      if (delta <= 0) delta += B;
      if (delta <= static_cast<long long>(k)) ++hits;
      ++total;
      prev = static_cast<long long>(ev.pos);
    }
  }
  return total > 0 ? static_cast<double>(hits) / static_cast<double>(total) : 1.0;
}

double global_arness_at_k(const DecodeTrace& trace, std::size_t k) {
  if (k < 1) throw std::invalid_argument("global_arness_at_k: k must be >= 1");
  std::size_t hits = 0, total = 0;
  std::set<std::size_t> masked;
  std::size_t cur_block = static_cast<std::size_t>(-1);
  for (const auto& step : trace.steps) {
    if (step.block_index != cur_block) {
      cur_block = step.block_index;
      masked.clear();
      for (std::size_t i = 0; i < trace.block_size; ++i) masked.insert(i);
    }
    for (const auto& ev : step.commits) {
      std::size_t rank = 0;
      for (auto it = masked.begin(); it != masked.end() && rank < k; ++it, ++rank) {
        if (*it == ev.pos) {
          ++hits;
          break;
        }
      }
      ++total;
      masked.erase(ev.pos);
    }
  }
  return total > 0 ? static_cast<double>(hits) / static_cast<double>(total) : 1.0;
}

double local_energy(double p, double q) {
  if (p <= 0.0 || q <= 0.0) throw NonpositiveProb();
  return -std::log(q) + std::log(p);
}

ConfidenceCurve confidence_curve(const DecodeTrace& trace, std::size_t n_bins) {
  if (n_bins < 1) throw std::invalid_argument("confidence_curve: n_bins must be >= 1");
  ConfidenceCurve curve;
  curve.mean_confidence.assign(n_bins, 0.0);
  curve.tokens_per_step.assign(n_bins, 0.0);
  curve.event_count.assign(n_bins, 0);

  std::size_t total = 0;
  for (const auto& step : trace.steps) total += step.commits.size();
  if (total == 0) return curve;

  auto bin_of = [&](std::size_t event_index) {
    const double x = static_cast<double>(event_index) / static_cast<double>(total);
    return std::min(n_bins - 1, static_cast<std::size_t>(x * static_cast<double>(n_bins)));
  };

  std::vector<std::size_t> steps_per_bin(n_bins, 0);
  std::size_t idx = 0;
  for (const auto& step : trace.steps) {
    if (!step.commits.empty()) {
      const std::size_t step_bin = bin_of(idx);
      ++steps_per_bin[step_bin];
      curve.tokens_per_step[step_bin] += static_cast<double>(step.commits.size());
    }
    for (const auto& ev : step.commits) {
      const std::size_t b = bin_of(idx);
      curve.mean_confidence[b] += ev.conf;
      ++curve.event_count[b];
      ++idx;
    }
  }
  for (std::size_t b = 0; b < n_bins; ++b) {
    if (curve.event_count[b] > 0)
      curve.mean_confidence[b] /= static_cast<double>(curve.event_count[b]);
    if (steps_per_bin[b] > 0) curve.tokens_per_step[b] /= static_cast<double>(steps_per_bin[b]);
  }
  return curve;
}

}  // namespace s2d2
