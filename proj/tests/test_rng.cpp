#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "linforget/rng.hpp"

using linforget::SeededRng;

TEST_CASE("identical (seed, stream) reproduces identical sequences") {
  SeededRng a(42, 7);
  SeededRng b(42, 7);
  for (int i = 0; i < 200; ++i) CHECK(a.next_u64() == b.next_u64());

  SeededRng c(42, 7);
  SeededRng d(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(c.next_gaussian() == d.next_gaussian());
}

TEST_CASE("different streams and seeds decorrelate") {
  SeededRng a(42, 0);
  SeededRng b(42, 1);
  SeededRng c(43, 0);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t x = a.next_u64();
    if (x == b.next_u64()) ++same_ab;
    if (x == c.next_u64()) ++same_ac;
  }
  CHECK(same_ab == 0);
  CHECK(same_ac == 0);
}

TEST_CASE("substreams depend on identity, not on parent position") {
  SeededRng parent(99, 3);
  SeededRng early = parent.substream(5);
  for (int i = 0; i < 1000; ++i) parent.next_u64();
  SeededRng late = parent.substream(5);
  for (int i = 0; i < 50; ++i) CHECK(early.next_u64() == late.next_u64());

  SeededRng other = parent.substream(6);
  SeededRng five = SeededRng(99, 3).substream(5);
  CHECK(other.next_u64() != five.next_u64());
}

TEST_CASE("uniform draws live in [0, 1)") {
  SeededRng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.next_uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("gaussian moments") {
  SeededRng rng(2024);
  const int count = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < count; ++i) {
    const double g = rng.next_gaussian();
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / count;
  const double var = sum_sq / count - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("next_below is bounded and roughly uniform") {
  SeededRng rng(7);
  std::vector<int> counts(10, 0);
  const int draws = 50000;
  for (int i = 0; i < draws; ++i) {
    const std::uint64_t v = rng.next_below(10);
    REQUIRE(v < 10);
    ++counts[static_cast<std::size_t>(v)];
  }
  for (int c : counts) {
    CHECK(c > draws / 10 - 600);
    CHECK(c < draws / 10 + 600);
  }
}
