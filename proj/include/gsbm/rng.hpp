#pragma once

#include <cstdint>
#include <random>

namespace gsbm {

/// SplitMix64 finalizer. Used both to derive independent stream seeds and as
/// the counter-based hash behind per-pair edge decisions.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Top 53 bits of a 64-bit word mapped to [0, 1).
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Derive the seed of substream `stream` from `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ mix64(stream + 0x632BE59BD9B4E019ULL));
}

/// Seeded, splittable generator. Wraps mt19937_64 so it plugs into the
/// standard distributions; `split` hands out statistically independent
/// children keyed by a stream id, so results never depend on call order
/// across streams.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  double uniform() { return to_unit(engine_()); }
  bool bernoulli(double p) { return uniform() < p; }

  Rng split(std::uint64_t stream) const { return Rng(derive_seed(seed_, stream)); }
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace gsbm
