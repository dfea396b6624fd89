#include "s2d2/masks.hpp"

#include <stdexcept>

namespace s2d2 {

AttnMask causal_mask(std::size_t n) {
  if (n < 1) throw std::invalid_argument("causal_mask: n must be >= 1");
  AttnMask m(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c <= r; ++c) m.set(r, c, true);
  return m;
}

AttnMask verifier_mask(std::size_t L) {
  if (L < 1) throw std::invalid_argument("verifier_mask: L must be >= 1");
  AttnMask m(2 * L);
  for (std::size_t r = 0; r < L; ++r) {
    for (std::size_t c = 0; c <= r; ++c) m.set(r, c, true);  // A_L
    for (std::size_t c = 0; c < r; ++c) m.set(L + r, c, true);  // A_L^<
    m.set(L + r, L + r, true);  // I_L
  }
  return m;
}

AttnMask draft_mask(std::size_t B, std::size_t j) {
  if (B < 1) throw std::invalid_argument("draft_mask: B must be >= 1");
  if (j > B) throw std::invalid_argument("draft_mask: j must be in [0, B]");
  AttnMask m(B);
  for (std::size_t r = 0; r < j; ++r)
    for (std::size_t c = 0; c <= r; ++c) m.set(r, c, true);
  for (std::size_t r = j; r < B; ++r)
    for (std::size_t c = 0; c < B; ++c) m.set(r, c, true);
  return m;
}

AttnMask block_full_mask(std::size_t B) {
  if (B < 1) throw std::invalid_argument("block_full_mask: B must be >= 1");
  AttnMask m(B);
  for (std::size_t r = 0; r < B; ++r)
    for (std::size_t c = 0; c < B; ++c) m.set(r, c, true);
  return m;
}

}  // namespace s2d2
