#ifndef MARKERLR_RNG_HPP
#define MARKERLR_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace markerlr {

/// SplitMix64 finalizer (Steele, Lea & Flood). Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// FNV-1a over a byte string; used to turn stream names into stream tags.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Counter-based generator. Output k of a stream with key K is
/// mix64(K + (k + 1) * golden_gamma), i.e. SplitMix64 run in counter mode, so
/// any draw can be recomputed from (key, k) alone and the sequence is
/// identical on every platform.
///
/// Sub-streams are derived by hashing a parent key with a sequence of tags:
///   key(seed, t1, ..., tm) = mix64(... mix64(mix64(seed) ^ t1) ... ^ tm)
/// Named stream tags are fnv1a64 of an ASCII name ("subject", "error", ...).
///
/// Satisfies UniformRandomBitGenerator, so Boost.Random distributions can be
/// driven by it.
class CounterRng {
public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  static CounterRng derive(std::uint64_t seed,
                           std::initializer_list<std::uint64_t> tags) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform double in the open interval (0, 1).
  double uniform_open() noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t stream_tag(std::string_view name) noexcept;

} // namespace markerlr

#endif // MARKERLR_RNG_HPP
