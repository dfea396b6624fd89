#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace s2d2 {

using TokenId = std::uint32_t;

struct AllZeroError : std::runtime_error {
  AllZeroError() : std::runtime_error("normalize_dist: all weights are zero") {}
};

// Dense probability vector over the vocabulary.
struct Dist {
  std::vector<double> probs;

  std::size_t vocab_size() const { return probs.size(); }
  double operator[](std::size_t v) const { return probs[v]; }
};

// Current block under decoding plus the already-committed context.
// Positions holding `mask_id` form the masked set M_t.
struct BlockState {
  std::vector<TokenId> tokens;            // length B
  std::vector<TokenId> committed_prefix;  // prompt + finalized blocks
  TokenId mask_id = 0;

  std::size_t block_size() const { return tokens.size(); }

  std::vector<std::size_t> masked_positions() const {
    std::vector<std::size_t> m;
    for (std::size_t i = 0; i < tokens.size(); ++i)
      if (tokens[i] == mask_id) m.push_back(i);
    return m;
  }
};

// Half-open index range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
};

Dist normalize_dist(const std::vector<double>& weights);

// Top-1 minus top-2 probability.
double top1_margin(const Dist& d);

// Shannon entropy over natural log, divided by log(vocab_size).
double normalized_entropy(const Dist& d);

// Maximal run of consecutive indices starting at the smallest element.
IndexRange first_contiguous_span(const std::vector<std::size_t>& masked_positions);

}  // namespace s2d2
