#include "dpcausal/rng.hpp"

#include "dpcausal/normal.hpp"

namespace dpcausal {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

}  // namespace

RngStream RngStream::keyed(std::uint64_t seed, std::initializer_list<std::uint64_t> words) {
  std::uint64_t key = mix64(seed + kGolden);
  for (std::uint64_t w : words) {
    key = mix64(key ^ mix64(w + kGolden));
  }
  return RngStream(key);
}

RngStream RngStream::split(std::uint64_t word) const {
  return RngStream(mix64(key_ ^ mix64(word + kGolden)));
}

std::uint64_t RngStream::next_u64() { return mix64(key_ + (++counter_) * kGolden); }

double RngStream::next_uniform() {
  // 53 random bits, offset by half an ulp so the result is strictly inside (0, 1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_gaussian() { return norm_quantile(next_uniform()); }

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  const std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v >= threshold) return v % bound;
  }
}

}  // namespace dpcausal
