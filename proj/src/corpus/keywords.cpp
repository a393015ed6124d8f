#include "taletailor/corpus/keywords.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

namespace taletailor::corpus {

KeywordIndex::KeywordIndex(std::span<const std::string> documents, const text::WordSet& stop_words)
    : stop_words_(&stop_words), documents_(documents.size()) {
  for (const auto& doc : documents) {
    const auto t = text::tokenize(doc, stop_words);
    const std::unordered_set<std::string> terms(t.filtered_words.begin(), t.filtered_words.end());
    for (const auto& term : terms) ++document_frequency_[term];
  }
}

double KeywordIndex::idf(std::string_view term) const {
  const auto it = document_frequency_.find(text::to_lower(term));
  const double df = it == document_frequency_.end() ? 0.0 : static_cast<double>(it->second);
  return std::log((1.0 + static_cast<double>(documents_)) / (1.0 + df)) + 1.0;
}

std::vector<std::pair<std::string, double>> KeywordIndex::weights(std::string_view extract) const {
  const auto t = text::tokenize(extract, *stop_words_);
  std::map<std::string, std::size_t> tf;
  for (const auto& w : t.filtered_words) ++tf[w];
  std::vector<std::pair<std::string, double>> out;
  out.reserve(tf.size());
  for (const auto& [term, count] : tf) out.emplace_back(term, static_cast<double>(count) * idf(term));
  // The map yields alphabetical order, so a stable sort keeps ties alphabetical.
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

std::string keyword_prompt(std::string_view extract, const KeywordIndex& index, std::size_t k) {
  const auto w = index.weights(extract);
  std::string out;
  for (std::size_t i = 0; i < std::min(k, w.size()); ++i) {
    if (!out.empty()) out.push_back(' ');
    out += w[i].first;
  }
  return out;
}

}  // namespace taletailor::corpus
