#include "s2d2/core.hpp"

#include <algorithm>
#include <cmath>

namespace s2d2 {

Dist normalize_dist(const std::vector<double>& weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("normalize_dist: negative weight");
    sum += w;
  }
  if (sum <= 0.0) throw AllZeroError();
  Dist d;
  d.probs.resize(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) d.probs[i] = weights[i] / sum;
  return d;
}

double top1_margin(const Dist& d) {
  if (d.vocab_size() < 2) throw std::invalid_argument("top1_margin: vocab_size < 2");
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

double normalized_entropy(const Dist& d) {
  double h = 0.0;
  for (double p : d.probs)
    if (p > 0.0) h -= p * std::log(p);
  double hmax = std::log(static_cast<double>(d.vocab_size()));
  return hmax > 0.0 ? h / hmax : 0.0;
}

IndexRange first_contiguous_span(const std::vector<std::size_t>& masked_positions) {
  if (masked_positions.empty()) return {};
  IndexRange r{masked_positions.front(), masked_positions.front() + 1};
  for (std::size_t k = 1; k < masked_positions.size(); ++k) {
    if (masked_positions[k] != r.end) break;
    ++r.end;
  }
  return r;
}

}  // namespace s2d2
