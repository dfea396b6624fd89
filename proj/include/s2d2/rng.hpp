#pragma once

#include <cstdint>
#include <initializer_list>

namespace s2d2 {

// Counter-based generator: output depends only on (key, counter), so
// streams derived from the same seed are order-independent across
// parallel workers.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : key_(key) {}

  // Derive a stream key from a seed and a list of identifiers
  // (cell index, sequence index, stream role, ...).
  static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
    std::uint64_t k = mix(seed ^ 0x9e3779b97f4a7c15ull);
    for (std::uint64_t id : ids) k = mix(k ^ mix(id + 0xbf58476d1ce4e5b9ull));
    return Rng(k);
  }

  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  // splitmix64 finalizer; full-period, passes standard statistical tests.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace s2d2
