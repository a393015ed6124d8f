#include "taletailor/gen/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace taletailor::gen {

std::string_view to_string(SamplingMode mode) {
  return mode == SamplingMode::kNucleus ? "nucleus" : "top_k";
}

SamplingMode parse_sampling_mode(std::string_view s) {
  if (s == "nucleus") return SamplingMode::kNucleus;
  if (s == "top_k") return SamplingMode::kTopK;
  throw std::invalid_argument("unknown sampling mode: " + std::string(s));
}

void GeneratorConfig::validate() const {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("nucleus p must lie in (0, 1]");
  if (k < 1) throw std::invalid_argument("top-k k must be at least 1");
  if (max_tokens < 1) throw std::invalid_argument("max_tokens must be at least 1");
}

namespace {

// Nonzero-probability ids, descending probability, ties by ascending id.
std::vector<std::size_t> ranked_ids(std::span<const double> probs) {
  std::vector<std::size_t> ids;
  ids.reserve(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) ids.push_back(i);
  }
  std::stable_sort(ids.begin(), ids.end(),
                   [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });
  return ids;
}

}  // namespace

std::vector<std::size_t> nucleus_support(std::span<const double> probs, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("nucleus p must lie in (0, 1]");
  auto ids = ranked_ids(probs);
  if (ids.empty()) throw std::invalid_argument("distribution has no mass");
  double total = 0.0;
  for (std::size_t id : ids) total += probs[id];
  const double threshold = p * total;
  double cumulative = 0.0;
  std::size_t keep = 0;
  while (keep < ids.size()) {
    cumulative += probs[ids[keep]];
    ++keep;
    if (cumulative >= threshold) break;
  }
  ids.resize(keep);
  return ids;
}

std::vector<std::size_t> top_k_support(std::span<const double> probs, int k) {
  if (k < 1) throw std::invalid_argument("top-k k must be at least 1");
  auto ids = ranked_ids(probs);
  if (ids.empty()) throw std::invalid_argument("distribution has no mass");
  if (ids.size() > static_cast<std::size_t>(k)) ids.resize(static_cast<std::size_t>(k));
  return ids;
}

std::size_t sample_from_support(std::span<const double> probs,
                                std::span<const std::size_t> support, CounterRng& rng) {
  if (support.empty()) throw std::invalid_argument("empty sampling support");
  double mass = 0.0;
  for (std::size_t id : support) mass += probs[id];
  const double u = rng.uniform() * mass;
  double cumulative = 0.0;
  for (std::size_t id : support) {
    cumulative += probs[id];
    if (u < cumulative) return id;
  }
  return support.back();
}

std::size_t nucleus_sample(std::span<const double> probs, double p, CounterRng& rng) {
  const auto support = nucleus_support(probs, p);
  return sample_from_support(probs, support, rng);
}

std::size_t top_k_sample(std::span<const double> probs, int k, CounterRng& rng) {
  const auto support = top_k_support(probs, k);
  return sample_from_support(probs, support, rng);
}

std::size_t sample(std::span<const double> probs, const GeneratorConfig& config,
                   CounterRng& rng) {
  return config.mode == SamplingMode::kNucleus ? nucleus_sample(probs, config.p, rng)
                                               : top_k_sample(probs, config.k, rng);
}

}  // namespace taletailor::gen
