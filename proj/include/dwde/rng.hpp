#pragma once

#include <bit>
#include <cstdint>
#include <random>

namespace dwde::rng {

/// SplitMix64 output function; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based pseudo-random function: a pure function of (key, counter),
/// so any site or walk index can be evaluated without sequential state.
constexpr std::uint64_t prf(std::uint64_t key, std::uint64_t counter) noexcept {
  return mix64(mix64(key) ^ mix64(counter ^ 0xd1b54a32d192ed03ULL));
}

constexpr std::uint64_t derive(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) noexcept {
  return prf(prf(master, a), b ^ 0x5851f42d4c957f2dULL);
}

/// Uniform double in [0,1) from the top 53 bits.
constexpr double unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

using Engine = std::mt19937_64;

/// Unbiased integer in [0, n) (Lemire's multiply-and-reject). Used instead of
/// std::uniform_int_distribution so that draws are identical across standard
/// library implementations.
template <class Gen>
std::uint64_t bounded(Gen& gen, std::uint64_t n) {
  if ((n & (n - 1)) == 0) return gen() & (n - 1);
  unsigned __int128 m = static_cast<unsigned __int128>(gen()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(gen()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Hands out the bits of each engine draw a few at a time, so that
/// power-of-two ranges (dyadic symbol laws) do not burn a full draw per
/// sample. Leftover bits that are too few for a request are discarded.
class BitStream {
 public:
  using result_type = std::uint64_t;

  explicit BitStream(Engine& engine) : engine_(engine) {}

  std::uint64_t operator()() { return engine_(); }

  std::uint64_t take(int bits) {
    if (left_ < bits) {
      buffer_ = engine_();
      left_ = 64;
    }
    const std::uint64_t v = bits == 64 ? buffer_ : buffer_ & ((std::uint64_t{1} << bits) - 1);
    buffer_ = bits == 64 ? 0 : buffer_ >> bits;
    left_ -= bits;
    return v;
  }

 private:
  Engine& engine_;
  std::uint64_t buffer_ = 0;
  int left_ = 0;
};

inline std::uint64_t bounded(BitStream& bits, std::uint64_t n) {
  if ((n & (n - 1)) == 0) return n == 1 ? 0 : bits.take(std::countr_zero(n));
  return bounded<BitStream>(bits, n);
}

}  // namespace dwde::rng
