#include "taletailor/rerank/reranker.hpp"

#include <algorithm>
#include <stdexcept>

#include "taletailor/gen/errors.hpp"
#include "taletailor/text/metrics.hpp"

namespace taletailor::rerank {

void RerankConfig::validate() const {
  if (population < 2 || population % 2 != 0) {
    throw std::invalid_argument("population must be even and at least 2");
  }
  if (rounds < 0) throw std::invalid_argument("rounds must be nonnegative");
  if (hq_return < 1 || hq_return > hq_generate) {
    throw std::invalid_argument("need 1 <= hq_return <= hq_generate");
  }
}

std::vector<Candidate> rank_scored(std::vector<Candidate> candidates, const FeatureWeights& weights) {
  if (candidates.empty()) throw std::invalid_argument("cannot rank an empty batch");
  std::vector<double> column(candidates.size());
  for (std::size_t f = 0; f < text::kFeatureCount; ++f) {
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      column[i] = candidates[i].raw_metrics.values[f];
    }
    const auto scaled = text::min_max_normalize(column);
    for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i].scaled[f] = scaled[i];
  }
  for (auto& c : candidates) {
    double total = 0.0;
    for (std::size_t f = 0; f < text::kFeatureCount; ++f) total += weights[f] * c.scaled[f];
    c.normalized_score = total;
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.normalized_score > b.normalized_score;
                   });
  return candidates;
}

std::vector<Candidate> rank(std::span<const std::string> texts, const text::ScoringContext& ctx,
                            const FeatureWeights& weights) {
  if (texts.empty()) throw std::invalid_argument("cannot rank an empty batch");
  const auto metrics = text::score_batch(texts, ctx);
  std::vector<Candidate> candidates(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    candidates[i].text = texts[i];
    candidates[i].raw_metrics = metrics[i];
  }
  return rank_scored(std::move(candidates), weights);
}

std::string join_text(std::string_view base, std::string_view continuation) {
  std::string out(base);
  if (continuation.empty()) return out;
  if (!out.empty() && out.back() != ' ' && out.back() != '\n') out.push_back(' ');
  out += continuation;
  return out;
}

StepResult rerank_step(std::span<const Candidate> population,
                       const gen::CompletionProvider& provider, const text::ScoringContext& ctx,
                       const RerankConfig& config, const gen::GeneratorConfig& generator,
                       std::size_t round) {
  if (population.empty() || population.size() % 2 != 0) {
    throw std::invalid_argument("re-rank population must be even and nonempty");
  }
  StepResult result;

  std::vector<Candidate> extended(population.begin(), population.end());
  try {
    for (std::size_t i = 0; i < extended.size(); ++i) {
      gen::CompletionRequest request;
      request.context = extended[i].text;
      request.config = generator;
      request.config.seed = gen::derive_seed(generator.seed, round, i);
      request.n_candidates = 1;
      const auto response = provider.complete(request);
      if (response.candidates.size() != 1) {
        throw gen::GenerationError("provider returned the wrong number of candidates");
      }
      extended[i].text = join_text(extended[i].text, response.candidates.front());
      extended[i].lineage.push_back(i);
    }
  } catch (const gen::ProviderError&) {
    result.population.assign(population.begin(), population.end());
    result.degraded = true;
    return result;
  }

  std::vector<std::string> texts;
  texts.reserve(extended.size());
  for (const auto& c : extended) texts.push_back(c.text);
  const auto metrics = text::score_batch(texts, ctx);
  for (std::size_t i = 0; i < extended.size(); ++i) extended[i].raw_metrics = metrics[i];

  result.ranked = rank_scored(std::move(extended), config.weights);
  const std::size_t half = result.ranked.size() / 2;
  result.survivors.assign(result.ranked.begin(), result.ranked.begin() + static_cast<long>(half));
  result.population.reserve(population.size());
  for (const auto& s : result.survivors) {
    result.population.push_back(s);
    result.population.push_back(s);
  }
  return result;
}

RerankResult run_rerank(std::vector<Candidate> population, const gen::CompletionProvider& provider,
                        const text::ScoringContext& ctx, const RerankConfig& config,
                        const gen::GeneratorConfig& generator) {
  config.validate();
  RerankResult result;
  result.population = std::move(population);
  for (int round = 0; round < config.rounds; ++round) {
    auto step = rerank_step(result.population, provider, ctx, config, generator,
                            static_cast<std::size_t>(round));
    result.population = step.population;
    const bool degraded = step.degraded;
    result.steps.push_back(std::move(step));
    if (degraded) {
      result.degraded = true;
      break;
    }
  }
  return result;
}

std::vector<Candidate> seed_population(std::string_view context, const RerankConfig& config) {
  config.validate();
  Candidate seed;
  seed.text = std::string(context);
  return std::vector<Candidate>(static_cast<std::size_t>(config.population), seed);
}

std::vector<std::string> autocomplete_fast(std::string_view context,
                                           const gen::CompletionProvider& provider,
                                           const gen::GeneratorConfig& generator) {
  gen::CompletionRequest request{std::string(context), generator, 3};
  auto response = provider.complete(request);
  if (response.candidates.size() != 3) {
    throw gen::GenerationError("provider returned the wrong number of candidates");
  }
  return std::move(response.candidates);
}

std::vector<Candidate> autocomplete_hq(std::string_view context,
                                       const gen::CompletionProvider& provider,
                                       const text::ScoringContext& ctx, const RerankConfig& config,
                                       const gen::GeneratorConfig& generator) {
  config.validate();
  gen::CompletionRequest request{std::string(context), generator, config.hq_generate};
  const auto response = provider.complete(request);
  if (response.candidates.size() != static_cast<std::size_t>(config.hq_generate)) {
    throw gen::GenerationError("provider returned the wrong number of candidates");
  }
  std::vector<std::string> full;
  full.reserve(response.candidates.size());
  for (const auto& c : response.candidates) full.push_back(join_text(context, c));
  const auto metrics = text::score_batch(full, ctx);

  std::vector<Candidate> candidates(response.candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    candidates[i].text = response.candidates[i];
    candidates[i].raw_metrics = metrics[i];
  }
  auto ranked = rank_scored(std::move(candidates), config.weights);
  ranked.resize(static_cast<std::size_t>(config.hq_return));
  return ranked;
}

}  // namespace taletailor::rerank
