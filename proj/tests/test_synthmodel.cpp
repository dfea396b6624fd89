#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "s2d2/masks.hpp"
#include "s2d2/rng.hpp"
#include "s2d2/synthmodel.hpp"

using namespace s2d2;

namespace {

ModelSpec small_model(std::uint64_t seed) {
  ModelSpec m;
  m.vocab_size = 16;
  m.seed = seed;
  return m;
}

bool dists_equal(const std::vector<Dist>& a, const std::vector<Dist>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].probs != b[i].probs) return false;  // bitwise equality
  return true;
}

}  // namespace

TEST_CASE("forward is deterministic and well-formed") {
  const ModelSpec m = small_model(7);
  const std::vector<TokenId> prefix{1, 2, 3};
  const std::vector<TokenId> block{4, m.mask_id(), m.mask_id(), 5};
  const AttnMask mask = block_full_mask(4);
  const auto a = forward(m, prefix, block, mask, {0, 1, 2, 3});
  const auto b = forward(m, prefix, block, mask, {0, 1, 2, 3});
  CHECK(dists_equal(a, b));
  for (const auto& d : a) {
    double sum = 0.0;
    for (double p : d.probs) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(d.probs[m.mask_id()] == 0.0);
  }
}

TEST_CASE("identical visible contexts give identical distributions") {
  const ModelSpec m = small_model(11);
  const std::vector<TokenId> prefix{1, 2};
  // Under a causal mask, position 1 sees only key 0 in both blocks; blocks
  // differ beyond position 1, which position 1 cannot attend to.
  const std::vector<TokenId> block_a{4, m.mask_id(), 6, 7};
  const std::vector<TokenId> block_b{4, m.mask_id(), 9, 3};
  const AttnMask mask = causal_mask(4);
  const auto da = forward(m, prefix, block_a, mask, {1});
  const auto db = forward(m, prefix, block_b, mask, {1});
  CHECK(dists_equal(da, db));
}

TEST_CASE("mask-respect: visible flips change the output, hidden flips do not") {
  Rng rng(123);
  int visible_changes = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const ModelSpec m = small_model(rng.next_u64());
    const std::size_t B = 3 + rng.next_u64() % 5;
    std::vector<TokenId> block(B);
    for (auto& t : block) t = static_cast<TokenId>(rng.next_u64() % (m.vocab_size - 2));
    // Random mask with full diagonal.
    AttnMask mask(B);
    for (std::size_t r = 0; r < B; ++r)
      for (std::size_t c = 0; c < B; ++c) mask.set(r, c, r == c || rng.next_double() < 0.5);
    const std::size_t q = rng.next_u64() % B;
    std::size_t flip = rng.next_u64() % B;
    if (flip == q) flip = (flip + 1) % B;
    if (B == 1) continue;

    const auto before = forward(m, {1}, block, mask, {q});
    std::vector<TokenId> mutated = block;
    mutated[flip] = static_cast<TokenId>((block[flip] + 1) % (m.vocab_size - 2));
    const auto after = forward(m, {1}, mutated, mask, {q});
    if (mask.at(q, flip)) {
      if (!dists_equal(before, after)) ++visible_changes;
    } else {
      CHECK(dists_equal(before, after));
    }
  }
  // Hash-based scores should essentially always move when a visible key flips.
  CHECK(visible_changes > 0);
}

TEST_CASE("drift=0 makes draft and verify modes coincide; drift>0 separates them") {
  const ModelSpec m0 = small_model(5);
  const std::vector<TokenId> block{m0.mask_id(), m0.mask_id()};
  const AttnMask mask = block_full_mask(2);
  CHECK(dists_equal(forward(m0, {1}, block, mask, {0, 1}, ForwardMode::kDraft),
                    forward(m0, {1}, block, mask, {0, 1}, ForwardMode::kVerify)));
  ModelSpec md = m0;
  md.drift = 0.5;
  CHECK_FALSE(dists_equal(forward(md, {1}, block, mask, {0, 1}, ForwardMode::kDraft),
                          forward(md, {1}, block, mask, {0, 1}, ForwardMode::kVerify)));
}

TEST_CASE("forward rejects inconsistent mask dimensions") {
  const ModelSpec m = small_model(1);
  const std::vector<TokenId> block{1, 2, 3};
  CHECK_THROWS_AS(forward(m, {1}, block, block_full_mask(2), {0}), DimensionMismatch);
}

TEST_CASE("subs_unmask_prob on the linear schedule") {
  const NoiseSchedule sched = NoiseSchedule::linear();
  CHECK(subs_unmask_prob(sched, 0.5, 1.0) == doctest::Approx(0.5));
  CHECK(subs_unmask_prob(sched, 0.699999, 0.7) == doctest::Approx(0.0).epsilon(1e-4));
  CHECK(subs_unmask_prob(sched, 0.0, 0.3) == doctest::Approx(1.0));
  CHECK(subs_unmask_prob(sched, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(subs_unmask_prob(sched, 0.7, 0.7), InvalidRange);
}

TEST_CASE("subs_step endpoint behavior") {
  const ModelSpec m = small_model(3);
  BlockState block{{m.mask_id(), 2, m.mask_id(), m.mask_id()}, {1}, m.mask_id()};
  const AttnMask mask = block_full_mask(4);
  const auto dists = forward(m, block.committed_prefix, block.tokens, mask, {0, 2, 3});

  SUBCASE("rho=1 fills every masked position") {
    Rng rng(1);
    const BlockState out = subs_step(block, dists, 1.0, rng);
    CHECK(out.masked_positions().empty());
    CHECK(out.tokens[1] == 2);
  }
  SUBCASE("rho=0 leaves the block unchanged") {
    Rng rng(1);
    const BlockState out = subs_step(block, dists, 0.0, rng);
    CHECK(out.tokens == block.tokens);
  }
}

TEST_CASE("subs_step unmasking count is Binomial(4, 0.5) on average") {
  const ModelSpec m = small_model(9);
  BlockState block{{m.mask_id(), m.mask_id(), m.mask_id(), m.mask_id()}, {1}, m.mask_id()};
  const auto dists =
      forward(m, block.committed_prefix, block.tokens, block_full_mask(4), {0, 1, 2, 3});
  Rng rng(77);
  double total_unmasked = 0.0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    const BlockState out = subs_step(block, dists, 0.5, rng);
    total_unmasked += static_cast<double>(4 - out.masked_positions().size());
    for (std::size_t pos = 0; pos < 4; ++pos)
      if (out.tokens[pos] != m.mask_id()) CHECK(out.tokens[pos] != m.mask_id());
  }
  CHECK(total_unmasked / trials == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("sample_dist matches the distribution it samples from") {
  Dist d{{0.2, 0.5, 0.3}};
  Rng rng(15);
  std::vector<double> counts(3, 0.0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) counts[sample_dist(d, rng)] += 1.0;
  for (std::size_t v = 0; v < 3; ++v) CHECK(counts[v] / n == doctest::Approx(d.probs[v]).epsilon(0.03));
}

TEST_CASE("eos bonus raises the EOS probability with position") {
  ModelSpec m = small_model(21);
  m.eos_bonus = 0.5;
  const std::vector<TokenId> block{m.mask_id()};
  const AttnMask mask = block_full_mask(1);
  std::vector<TokenId> short_prefix{1, 2};
  std::vector<TokenId> long_prefix{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
  // Average over several seeds: the positional bonus must dominate hash noise.
  double short_eos = 0.0, long_eos = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    ModelSpec ms = m;
    ms.seed = s;
    short_eos += forward(ms, short_prefix, block, mask, {0})[0].probs[m.eos_id()];
    long_eos += forward(ms, long_prefix, block, mask, {0})[0].probs[m.eos_id()];
  }
  CHECK(long_eos > short_eos);
}
