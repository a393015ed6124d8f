#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace taletailor::gen {

inline constexpr std::string_view kEndOfSentence = "<|eos|>";

/// Tokens for the built-in model: words, single punctuation characters and
/// the end-of-sentence sentinel. A sentinel is inserted after every run of
/// sentence terminators; consecutive sentinels collapse to one.
std::vector<std::string> model_tokens(std::string_view text);

/// Joins tokens with spaces, attaching closing punctuation to the previous
/// token. Sentinels are dropped.
std::string detokenize(std::span<const std::string> tokens);

using TokenId = std::uint32_t;

/// Sparse conditional distribution: (token id, probability), ascending id.
using SparseDistribution = std::vector<std::pair<TokenId, double>>;

/// Order-n count model. Conditionals come from the longest suffix of the
/// history that was seen in training, backing off down to unigrams.
class NGramModel {
 public:
  /// Every sequence is treated as starting after an end-of-sentence
  /// sentinel. Throws std::invalid_argument for order < 1 or an empty corpus.
  static NGramModel train(const std::vector<std::vector<std::string>>& corpus, int order);

  int order() const { return order_; }

  /// Sorted; always contains the sentinel.
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  std::optional<TokenId> token_id(std::string_view token) const;
  TokenId eos_id() const { return eos_id_; }

  SparseDistribution conditional_ids(std::span<const TokenId> history) const;

  /// Dense distribution over vocabulary() given a token history. Unknown
  /// tokens cut the usable context at their position.
  std::vector<double> distribution(std::span<const std::string> history) const;

  /// Raw count table for one context (empty context = unigrams); nullopt
  /// if the context was never seen.
  std::optional<std::vector<std::pair<TokenId, std::uint64_t>>> counts(
      std::span<const std::string> context) const;

  /// Number of distinct stored contexts, all orders.
  std::size_t context_count() const;

 private:
  struct ContextCounts {
    std::uint64_t total = 0;
    std::vector<std::pair<TokenId, std::uint64_t>> next;  // ascending id
  };

  static std::string key_of(std::span<const TokenId> context);
  const ContextCounts* find(std::span<const TokenId> context) const;

  int order_ = 1;
  TokenId eos_id_ = 0;
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, TokenId> ids_;
  // contexts_[k] holds contexts of length k.
  std::vector<std::unordered_map<std::string, ContextCounts>> contexts_;
};

}  // namespace taletailor::gen
