#pragma once

#include <cstdint>
#include <random>

namespace ustatboot {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of the stream keyed by (parent, index). Pure function of its inputs,
/// so a stream can be rebuilt without replaying any other stream.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept;

/// Seeded random stream with Gaussian, uniform and chi-square helpers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  /// Independent child stream; depends only on seed() and index, never on
  /// how much of this stream has been consumed.
  Rng substream(std::uint64_t index) const { return Rng(derive_seed(seed_, index)); }

  std::uint64_t next_u64() { return engine_(); }
  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  double chi_squared(double dof);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace ustatboot
