#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace s2d2 {

// Square boolean attention mask: entry (r, c) true means query row r may
// attend to key column c. Governs only in-block structure; committed-prefix
// keys are implicitly visible to every in-block query.
class AttnMask {
 public:
  AttnMask() = default;
  explicit AttnMask(std::size_t n) : n_(n), bits_(n * n, 0) {}

  std::size_t size() const { return n_; }
  bool at(std::size_t r, std::size_t c) const { return bits_[r * n_ + c] != 0; }
  void set(std::size_t r, std::size_t c, bool v) { bits_[r * n_ + c] = v ? 1 : 0; }

  bool operator==(const AttnMask& o) const { return n_ == o.n_ && bits_ == o.bits_; }

  // Row-major bit string, for trace debugging.
  std::string to_bitstring() const {
    std::string s;
    s.reserve(bits_.size());
    for (std::uint8_t b : bits_) s.push_back(b ? '1' : '0');
    return s;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Lower triangular including the diagonal.
AttnMask causal_mask(std::size_t n);

// 2L x 2L self-verification mask: [[A_L, 0], [A_L^<, I_L]]. Rows L..2L-1 are
// the verifier query rows; row L+i attends to drafted tokens 0..i-1 and to
// its own mask copy at L+i.
AttnMask verifier_mask(std::size_t L);

// Partially causal drafting mask: causal on the committed prefix of length j,
// rows j..B-1 attend everywhere.
AttnMask draft_mask(std::size_t B, std::size_t j);

// All-true B x B (standard within-block bidirectional attention).
AttnMask block_full_mask(std::size_t B);

}  // namespace s2d2
