#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "taletailor/gen/rng.hpp"

namespace taletailor::gen {

enum class SamplingMode { kNucleus, kTopK };

std::string_view to_string(SamplingMode mode);
SamplingMode parse_sampling_mode(std::string_view s);

struct GeneratorConfig {
  SamplingMode mode = SamplingMode::kNucleus;
  double p = 0.9;  // nucleus threshold, active in kNucleus
  int k = 50;      // cutoff, active in kTopK
  int max_tokens = 40;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument for p outside (0,1], k < 1 or max_tokens < 1.
  void validate() const;
};

/// Token ids kept by nucleus truncation: descending probability (ties by
/// ascending id), shortest prefix whose mass reaches p of the total.
/// Zero-probability tokens are never kept.
std::vector<std::size_t> nucleus_support(std::span<const double> probs, double p);

/// The k most probable token ids with nonzero probability, ties by id.
std::vector<std::size_t> top_k_support(std::span<const double> probs, int k);

/// Draws from `probs` restricted to `support`, renormalized. Weights need not
/// sum to 1.
std::size_t sample_from_support(std::span<const double> probs,
                                std::span<const std::size_t> support, CounterRng& rng);

std::size_t nucleus_sample(std::span<const double> probs, double p, CounterRng& rng);
std::size_t top_k_sample(std::span<const double> probs, int k, CounterRng& rng);

std::size_t sample(std::span<const double> probs, const GeneratorConfig& config,
                   CounterRng& rng);

}  // namespace taletailor::gen
