#include "taletailor/text/scoring.hpp"

#include <exception>
#include <stdexcept>
#include <unordered_map>

#include "taletailor/text/divergence.hpp"

namespace taletailor::text {

namespace {

// Re-expresses every distribution of `table` over `vocabulary`; tokens the
// table does not know get probability 0.
std::vector<TokenDistribution> align(const LogitTable& table,
                                     const std::vector<std::string>& vocabulary,
                                     const std::unordered_map<std::string, std::size_t>& index) {
  std::vector<std::size_t> slot(table.vocabulary.size());
  for (std::size_t i = 0; i < table.vocabulary.size(); ++i) {
    slot[i] = index.at(table.vocabulary[i]);
  }
  std::vector<TokenDistribution> out;
  out.reserve(table.distributions.size());
  for (const auto& dist : table.distributions) {
    if (dist.size() != table.vocabulary.size()) {
      throw std::runtime_error("logit table row does not match its vocabulary");
    }
    std::vector<double> aligned(vocabulary.size(), 0.0);
    for (std::size_t i = 0; i < dist.size(); ++i) aligned[slot[i]] = dist[i];
    out.push_back(TokenDistribution::from_probabilities(std::move(aligned)));
  }
  return out;
}

}  // namespace

double tale_like_text(std::string_view text, const LogitPair& pair) {
  if (!pair.preset || !pair.finetuned) throw std::invalid_argument("incomplete logit pair");
  const auto tokens = pair.finetuned->tokenize(text);
  if (tokens.empty()) return 0.0;
  const LogitTable preset = pair.preset->logits(tokens);
  const LogitTable finetuned = pair.finetuned->logits(tokens);
  if (preset.distributions.size() != finetuned.distributions.size()) {
    throw std::runtime_error("logit providers disagree on position count");
  }

  std::vector<std::string> vocabulary;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto* table : {&finetuned, &preset}) {
    for (const auto& tok : table->vocabulary) {
      if (index.emplace(tok, vocabulary.size()).second) vocabulary.push_back(tok);
    }
  }
  const auto p = align(preset, vocabulary, index);
  const auto q = align(finetuned, vocabulary, index);
  return tale_like(p, q);
}

MetricVector score_text(const TokenizedText& t, const ScoringContext& ctx) {
  MetricVector m;
  m[Feature::kReadability] = readability(t);
  m[Feature::kPositivity] = positivity(t, ctx.lexicon);
  m[Feature::kDiversity] = diversity(t);
  m[Feature::kSimplicity] = simplicity(t, ctx.frequent_words);
  m[Feature::kCoherency] = coherency(t);
  if (ctx.logit_pair) {
    m[Feature::kTaleLike] = tale_like_text(t.raw, *ctx.logit_pair);
  } else {
    m[Feature::kTaleLike] = 0.0;
    m.partial = true;
  }
  return m;
}

MetricVector score_text(std::string_view text, const ScoringContext& ctx) {
  return score_text(tokenize(text, ctx.stop_words), ctx);
}

std::vector<MetricVector> score_batch_serial(std::span<const std::string> texts,
                                             const ScoringContext& ctx) {
  std::vector<MetricVector> out;
  out.reserve(texts.size());
  for (const auto& text : texts) out.push_back(score_text(text, ctx));
  return out;
}

std::vector<MetricVector> score_batch(std::span<const std::string> texts,
                                      const ScoringContext& ctx) {
  const auto n = static_cast<long>(texts.size());
  std::vector<MetricVector> out(texts.size());
  std::vector<std::exception_ptr> errors(texts.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = score_text(texts[static_cast<std::size_t>(i)], ctx);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace taletailor::text
