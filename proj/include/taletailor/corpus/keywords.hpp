#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "taletailor/text/tokenize.hpp"

namespace taletailor::corpus {

/// Document frequencies of content words over a corpus, for tf-idf keywords.
/// idf(t) = ln((1 + N) / (1 + df(t))) + 1.
class KeywordIndex {
 public:
  explicit KeywordIndex(std::span<const std::string> documents,
                        const text::WordSet& stop_words = text::default_stop_words());

  double idf(std::string_view term) const;
  std::size_t document_count() const { return documents_; }

  /// Content words of `extract` with tf * idf weights, best first, ties
  /// alphabetical.
  std::vector<std::pair<std::string, double>> weights(std::string_view extract) const;

 private:
  const text::WordSet* stop_words_;
  std::size_t documents_ = 0;
  std::unordered_map<std::string, std::size_t> document_frequency_;
};

/// The top `k` keywords of `extract`, space-joined. Empty if the extract has
/// no content words.
std::string keyword_prompt(std::string_view extract, const KeywordIndex& index, std::size_t k = 5);

}  // namespace taletailor::corpus
