#pragma once

#include <cstdint>

namespace taletailor::gen {

/// Counter-based generator: output i is splitmix64(key + (i + 1) * gamma).
/// Integer-only state, so streams are identical across platforms. `split`
/// derives an independent stream from (key, stream id).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0)
      : key_(key), counter_(counter) {}

  static std::uint64_t mix(std::uint64_t z);

  std::uint64_t next();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

  CounterRng split(std::uint64_t stream) const;

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

/// Combines values into a single 64-bit seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace taletailor::gen
