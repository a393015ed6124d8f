#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "taletailor/gen/ngram.hpp"
#include "taletailor/gen/sampling.hpp"
#include "taletailor/text/scoring.hpp"

namespace taletailor::gen {

struct CompletionRequest {
  std::string context;
  GeneratorConfig config;
  int n_candidates = 3;
};

struct CompletionResponse {
  std::vector<std::string> candidates;
};

class CompletionProvider {
 public:
  virtual ~CompletionProvider() = default;
  /// Identical (request, seed) must yield identical candidates.
  virtual CompletionResponse complete(const CompletionRequest& request) const = 0;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  /// One unit-norm vector per text, all of the same dimension.
  virtual std::vector<std::vector<float>> embed(std::span<const std::string> texts) const = 0;
};

/// Which half of the tale-like pair a logit request is for.
enum class ModelRole { kPreset, kFinetuned };

/// Completion and logits from a trained NGramModel.
class NGramProvider final : public CompletionProvider, public text::LogitProvider {
 public:
  explicit NGramProvider(std::shared_ptr<const NGramModel> model);

  CompletionResponse complete(const CompletionRequest& request) const override;

  /// Generated token ids (sentinel excluded) for one candidate stream, plus
  /// whether generation stopped at the sentinel.
  struct TokenTrace {
    std::vector<std::string> tokens;
    bool hit_end_of_sentence = false;
  };
  TokenTrace generate(const std::string& context, const GeneratorConfig& config,
                      std::uint64_t candidate_index) const;

  /// Sentinel-prefixed model tokens, so the first distribution predicts the
  /// first word.
  std::vector<std::string> tokenize(std::string_view text) const override;
  text::LogitTable logits(std::span<const std::string> tokens) const override;

  const NGramModel& model() const { return *model_; }

 private:
  std::shared_ptr<const NGramModel> model_;
};

/// Offline text embedder: signed feature hashing of lowercased content words
/// into `dim` buckets, L2-normalized.
///
/// bucket = fnv1a64(word) mod dim; sign = -1 if bit 32 of the hash is set,
/// else +1. Stop words are skipped unless the text has nothing else; a text
/// without words maps to the first basis vector.
class HashEmbedder final : public EmbeddingProvider {
 public:
  explicit HashEmbedder(std::size_t dim);

  std::vector<std::vector<float>> embed(std::span<const std::string> texts) const override;
  std::vector<float> embed_one(std::string_view text) const;

  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_;
};

std::uint64_t fnv1a64(std::string_view s);

}  // namespace taletailor::gen
