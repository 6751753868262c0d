#ifndef TPA_RNG_HPP
#define TPA_RNG_HPP

#include <cstdint>
#include <random>

namespace tpa {

// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of run `index` in an ensemble with master seed `master`: the
// (index+1)-th output of a SplitMix64 stream started at `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

__extension__ using uint128 = unsigned __int128;

// Reproducible random stream: std::mt19937_64 (fully specified by the
// standard) seeded with a single 64-bit value. Bounded integers use Lemire's
// multiply-and-reject method and reals take the top 53 bits, so a seed gives
// the same sequence on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform integer in [0, n), n > 0, without bias.
  std::uint64_t bounded(std::uint64_t n) {
    uint128 product = static_cast<uint128>(gen_()) * n;
    auto low = static_cast<std::uint64_t>(product);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        product = static_cast<uint128>(gen_()) * n;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  // Uniform real in [0, 1) on a 2^-53 grid.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace tpa

#endif  // TPA_RNG_HPP
