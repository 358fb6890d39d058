#include "markerlr/rng.hpp"

namespace markerlr {

namespace {
constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t stream_tag(std::string_view name) noexcept { return fnv1a64(name); }

CounterRng CounterRng::derive(std::uint64_t seed,
                              std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t key = mix64(seed);
  for (std::uint64_t t : tags) key = mix64(key ^ t);
  return CounterRng(key);
}

CounterRng::result_type CounterRng::operator()() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGoldenGamma);
}

double CounterRng::uniform_open() noexcept {
  // 53 random bits centred in their cell: never exactly 0 or 1.
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace markerlr
