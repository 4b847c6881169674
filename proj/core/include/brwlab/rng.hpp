#pragma once

#include <cstdint>
#include <limits>

namespace brwlab {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Combines a key with one more word; used to derive child stream keys.
constexpr std::uint64_t derive_key(std::uint64_t key, std::uint64_t word) noexcept {
  return mix64(key ^ (mix64(word + 0x9e3779b97f4a7c15ULL) + 0x632be59bd9b4e019ULL));
}

/// Counter-based random stream. The output sequence is a pure function of
/// the key, so streams can be created per tree node or per replicate without
/// any shared state; a node's randomness never depends on which other nodes
/// were generated (the property pruned/exact coupling relies on).
///
/// Satisfies UniformRandomBitGenerator.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  constexpr explicit StreamRng(std::uint64_t key = 0) noexcept : key_(mix64(key)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    counter_ += 0x9e3779b97f4a7c15ULL;
    return mix64(key_ + counter_);
  }

  /// Uniform double in the open interval (0, 1).
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Independent stream for sub-task `index` (replicate, grid point, ...).
  constexpr StreamRng split(std::uint64_t index) const noexcept {
    return StreamRng(derive_key(key_, index));
  }

  constexpr std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace brwlab
