#ifndef BOOSTRP_RANDOM_HPP
#define BOOSTRP_RANDOM_HPP

#include <cstdint>
#include <random>

namespace boostrp {

/// Master seed for every stochastic routine. Same seed and call sequence give
/// bit-identical draws on the same build.
struct RngSeed {
  std::uint64_t value = 0;

  constexpr RngSeed() = default;
  constexpr explicit RngSeed(std::uint64_t v) : value(v) {}
  friend constexpr bool operator==(RngSeed, RngSeed) = default;
};

using Rng = std::mt19937_64;

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Streams used when deriving sub-seeds, so that e.g. the projection drawn at
/// stage m and the tree grown at stage m never share a generator.
enum class SeedStream : std::uint64_t {
  split = 1,
  projection = 2,
  tree = 3,
  synthetic = 4,
  permutation = 5,
  benchmark = 6,
};

/// Counter-based sub-seed: a pure function of (master, stream, counter), so any
/// stage can be regenerated in isolation.
constexpr RngSeed derive_seed(RngSeed master, SeedStream stream, std::uint64_t counter) noexcept {
  std::uint64_t h = detail::splitmix64(master.value);
  h = detail::splitmix64(h ^ (static_cast<std::uint64_t>(stream) * 0xd6e8feb86659fd93ULL));
  h = detail::splitmix64(h ^ counter);
  return RngSeed{h};
}

inline Rng make_rng(RngSeed seed) { return Rng{seed.value}; }

}  // namespace boostrp

#endif  // BOOSTRP_RANDOM_HPP
