#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "taletailor/gen/provider.hpp"
#include "taletailor/gen/sampling.hpp"
#include "taletailor/text/scoring.hpp"

namespace taletailor::rerank {

using FeatureWeights = std::array<double, text::kFeatureCount>;
inline constexpr FeatureWeights kEqualWeights = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0};

struct Candidate {
  std::string text;
  text::MetricVector raw_metrics;
  /// Per-feature min-max scaled values within the ranked batch.
  std::array<double, text::kFeatureCount> scaled{};
  double normalized_score = 0.0;
  /// Position of this candidate's ancestor in each re-rank step's input.
  std::vector<std::size_t> lineage;
};

struct RerankConfig {
  int population = 8;
  int rounds = 1;
  int hq_generate = 10;
  int hq_return = 3;
  FeatureWeights weights = kEqualWeights;

  /// population must be even and >= 2, rounds >= 0, 1 <= hq_return <= hq_generate.
  void validate() const;
};

/// Ranks candidates whose raw_metrics are already filled: each feature is
/// min-max scaled across the batch, the weighted sum becomes
/// normalized_score, and the result is stably sorted by descending score
/// (ties keep input order). Throws std::invalid_argument on an empty batch.
std::vector<Candidate> rank_scored(std::vector<Candidate> candidates,
                                   const FeatureWeights& weights = kEqualWeights);

/// Scores `texts` with `ctx` then ranks them.
std::vector<Candidate> rank(std::span<const std::string> texts, const text::ScoringContext& ctx,
                            const FeatureWeights& weights = kEqualWeights);

/// Appends a continuation to a text with a single separating space.
std::string join_text(std::string_view base, std::string_view continuation);

struct StepResult {
  std::vector<Candidate> ranked;      // every extended candidate, best first
  std::vector<Candidate> survivors;   // top half of `ranked`
  std::vector<Candidate> population;  // survivors branched two ways
  bool degraded = false;              // provider failed; population is the input
};

/// One re-rank round: extend every candidate by one sentence, rank the
/// extended set on full text, keep the better half, then duplicate each
/// survivor so the population size is restored. Extension seeds derive from
/// (generator.seed, round, candidate position).
StepResult rerank_step(std::span<const Candidate> population,
                       const gen::CompletionProvider& provider, const text::ScoringContext& ctx,
                       const RerankConfig& config, const gen::GeneratorConfig& generator,
                       std::size_t round);

struct RerankResult {
  std::vector<Candidate> population;
  std::vector<StepResult> steps;
  bool degraded = false;
};

/// Runs `config.rounds` steps starting from `population`; zero rounds returns
/// the input unchanged. Stops early, flagged degraded, if a step fails.
RerankResult run_rerank(std::vector<Candidate> population, const gen::CompletionProvider& provider,
                        const text::ScoringContext& ctx, const RerankConfig& config,
                        const gen::GeneratorConfig& generator);

/// `config.population` copies of the context, ready for run_rerank.
std::vector<Candidate> seed_population(std::string_view context, const RerankConfig& config);

/// Three completions straight from the provider, unranked.
std::vector<std::string> autocomplete_fast(std::string_view context,
                                           const gen::CompletionProvider& provider,
                                           const gen::GeneratorConfig& generator);

/// Generates hq_generate completions, ranks them on context + completion and
/// returns the best hq_return. Candidate::text holds the completion alone.
std::vector<Candidate> autocomplete_hq(std::string_view context,
                                       const gen::CompletionProvider& provider,
                                       const text::ScoringContext& ctx, const RerankConfig& config,
                                       const gen::GeneratorConfig& generator);

}  // namespace taletailor::rerank
