#pragma once

#include <cstdint>
#include <initializer_list>

namespace dpcausal {

// Counter-based pseudo-random stream (SplitMix64). Output j depends only on
// (key, j), so streams derived from distinct keys are independent and calls
// can be reordered across threads without affecting other streams.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : key_(key) {}

  // Derives a stream key from a seed and a list of domain words. The same
  // words always produce the same stream.
  static RngStream keyed(std::uint64_t seed, std::initializer_list<std::uint64_t> words);

  // Child stream independent of this one and of siblings split with other words.
  RngStream split(std::uint64_t word) const;

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1).
  double next_uniform();

  // Standard normal draw via inverse-CDF of a uniform.
  double next_gaussian();

  // Uniform integer in [0, bound), bound >= 1. Unbiased (rejection sampling).
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dpcausal
