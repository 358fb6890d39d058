#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "markerlr/rng.hpp"

using markerlr::CounterRng;
using markerlr::stream_tag;

TEST(CounterRng, SameKeySameSequence) {
  CounterRng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(CounterRng, OutputIsPureFunctionOfKeyAndCounter) {
  CounterRng a(7);
  std::vector<std::uint64_t> first;
  for (int i = 0; i < 10; ++i) first.push_back(a());
  // SplitMix64 in counter mode: draw k is mix64(key + (k+1) * gamma).
  constexpr std::uint64_t gamma = 0x9e3779b97f4a7c15ULL;
  for (std::uint64_t k = 0; k < 10; ++k) EXPECT_EQ(first[k], markerlr::mix64(7 + (k + 1) * gamma));
}

TEST(CounterRng, KnownSplitMixValue) {
  // Reference output of the SplitMix64 generator seeded with 0.
  CounterRng a(0);
  EXPECT_EQ(a(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(a(), 0x6e789e6aa1b965f4ULL);
}

TEST(CounterRng, DerivedStreamsDiffer) {
  std::set<std::uint64_t> keys;
  for (auto name : {"placement", "condition", "protein", "subject", "error"})
    for (std::uint64_t j = 0; j < 50; ++j)
      keys.insert(CounterRng::derive(1, {stream_tag(name), j}).key());
  EXPECT_EQ(keys.size(), 250u);
  EXPECT_NE(CounterRng::derive(1, {5}).key(), CounterRng::derive(2, {5}).key());
  EXPECT_NE(CounterRng::derive(1, {5, 6}).key(), CounterRng::derive(1, {6, 5}).key());
}

TEST(CounterRng, UniformOpenStaysInside) {
  CounterRng a(3);
  double lo = 1, hi = 0, sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = a.uniform_open();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Fnv1a, ReferenceValues) {
  EXPECT_EQ(markerlr::fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(markerlr::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}
