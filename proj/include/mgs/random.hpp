#pragma once

// Counter-based random streams.
//
// A stream is a 64-bit key; draw number j of a stream is a SplitMix64 output
// at counter j, so draws can be taken in any order and any number of
// substreams can be derived from (key, id) without shared state. Output is
// therefore independent of how work is scheduled across threads.

#include <cstdint>
#include <limits>

namespace mgs {

namespace detail {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix64_finalize(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

class RandomStream {
public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed) noexcept
      : key_(detail::splitmix64_finalize(seed + detail::kGoldenGamma)) {}

  RandomStream substream(std::uint64_t id) const noexcept {
    RandomStream child(0);
    child.key_ = detail::splitmix64_finalize(key_ ^ detail::splitmix64_finalize(id + 0xD6E8FEB86659FD93ULL));
    return child;
  }

  std::uint64_t key() const noexcept { return key_; }

  // Random access.
  std::uint64_t bits_at(std::uint64_t position) const noexcept {
    return detail::splitmix64_finalize(key_ + (position + 1) * detail::kGoldenGamma);
  }

  // Uniform on [0,1) with 53 random bits.
  double uniform_at(std::uint64_t position) const noexcept {
    return static_cast<double>(bits_at(position) >> 11) * 0x1.0p-53;
  }

  // Sequential use; also makes the stream a UniformRandomBitGenerator.
  std::uint64_t operator()() noexcept { return bits_at(counter_++); }
  double next_uniform() noexcept { return uniform_at(counter_++); }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace mgs
