#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "s2d2/core.hpp"
#include "s2d2/rng.hpp"

using namespace s2d2;

TEST_CASE("normalize_dist basic cases") {
  CHECK(normalize_dist({2.0, 2.0}).probs == std::vector<double>{0.5, 0.5});
  CHECK(normalize_dist({1.0, 0.0, 0.0}).probs == std::vector<double>{1.0, 0.0, 0.0});
  CHECK_THROWS_AS(normalize_dist({0.0, 0.0}), AllZeroError);
}

TEST_CASE("normalize_dist output sums to one and stays nonnegative") {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> w(3 + rng.next_u64() % 14);
    for (auto& x : w) x = rng.next_double() * 5.0;
    w[rng.next_u64() % w.size()] += 1e-6;  // guarantee one positive weight
    const Dist d = normalize_dist(w);
    double sum = 0.0;
    for (double p : d.probs) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("top1_margin") {
  CHECK(top1_margin(Dist{{0.7, 0.2, 0.1}}) == doctest::Approx(0.5));
  CHECK(top1_margin(Dist{{0.0, 1.0, 0.0}}) == doctest::Approx(1.0));
  CHECK(top1_margin(Dist{{0.25, 0.25, 0.25, 0.25}}) == doctest::Approx(0.0));
}

TEST_CASE("normalized_entropy endpoints and dyadic case") {
  CHECK(normalized_entropy(Dist{{0.25, 0.25, 0.25, 0.25}}) == doctest::Approx(1.0));
  CHECK(normalized_entropy(Dist{{1.0, 0.0, 0.0}}) == doctest::Approx(0.0));
  CHECK(normalized_entropy(Dist{{0.5, 0.5, 0.0, 0.0}}) == doctest::Approx(0.5));
}

TEST_CASE("normalized_entropy stays in [0,1] for random distributions") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> w(2 + rng.next_u64() % 30);
    for (auto& x : w) x = rng.next_double() + 1e-9;
    const Dist d = normalize_dist(w);
    const double h = normalized_entropy(d);
    CHECK(h >= 0.0);
    CHECK(h <= 1.0 + 1e-12);
  }
}

TEST_CASE("first_contiguous_span") {
  SUBCASE("run with a gap") {
    const IndexRange r = first_contiguous_span({2, 3, 4, 7});
    CHECK(r.begin == 2);
    CHECK(r.end == 5);
  }
  SUBCASE("empty input") { CHECK(first_contiguous_span({}).empty()); }
  SUBCASE("singleton") {
    const IndexRange r = first_contiguous_span({0});
    CHECK(r.begin == 0);
    CHECK(r.end == 1);
  }
}

TEST_CASE("first_contiguous_span is a contiguous prefix of the input") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::size_t> positions;
    for (std::size_t i = 0; i < 16; ++i)
      if (rng.next_double() < 0.4) positions.push_back(i);
    const IndexRange r = first_contiguous_span(positions);
    if (positions.empty()) {
      CHECK(r.empty());
      continue;
    }
    CHECK(r.begin == positions.front());
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(positions[i] == r.begin + i);
    if (r.size() < positions.size()) CHECK(positions[r.size()] > r.end);
  }
}

TEST_CASE("BlockState masked positions") {
  BlockState b{{5, 9, 1, 9}, {1, 2}, 9};
  CHECK(b.masked_positions() == std::vector<std::size_t>{1, 3});
  CHECK(b.block_size() == 4);
}
