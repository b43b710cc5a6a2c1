#pragma once

#include <array>
#include <cstdint>

namespace gfluct {

// Philox4x32-10 counter-based generator. A (key, counter) pair maps to four
// independent 32-bit words; there is no sequential state.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

inline PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) noexcept {
  constexpr std::uint32_t kMulA = 0xD2511F53u, kMulB = 0xCD9E8D57u;
  constexpr std::uint32_t kWeylA = 0x9E3779B9u, kWeylB = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    key[0] += kWeylA;
    key[1] += kWeylB;
  }
  return ctr;
}

// Streams used by the samplers. Distinct streams never share counters.
enum class RngStream : std::uint32_t { Edges = 0, Latent = 1, Bootstrap = 2, Synthetic = 3 };

// Random words addressed by (master seed, replicate, stream, index).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint32_t replicate, RngStream stream) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        replicate_(replicate),
        stream_(static_cast<std::uint32_t>(stream)) {}

  // Words 4*block .. 4*block+3.
  PhiloxCounter block(std::uint64_t block) const noexcept {
    return philox4x32({static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
                       replicate_, stream_},
                      key_);
  }

  // Uniform in [0,1) with 53 random bits, from the first two words of a block.
  double uniform(std::uint64_t index) const noexcept {
    const auto w = block(index);
    const std::uint64_t bits = (static_cast<std::uint64_t>(w[0]) << 21) ^ (w[1] >> 11);
    return static_cast<double>(bits & ((1ull << 53) - 1)) * 0x1.0p-53;
  }

 private:
  PhiloxKey key_;
  std::uint32_t replicate_;
  std::uint32_t stream_;
};

// Threshold t with P(word < t) = q for a uniform 32-bit word, rounded to the
// nearest multiple of 2^-32. q = 0 and q = 1 are exact.
inline std::uint64_t bernoulli_threshold(double q) noexcept {
  if (!(q > 0.0)) return 0;
  if (q >= 1.0) return 1ull << 32;
  return static_cast<std::uint64_t>(q * 4294967296.0 + 0.5);
}

}  // namespace gfluct
