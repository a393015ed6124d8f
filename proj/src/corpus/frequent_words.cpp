#include "taletailor/corpus/frequent_words.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace taletailor::corpus {

std::vector<std::pair<std::string, std::size_t>> content_word_frequencies(
    std::span<const std::string> documents, const text::WordSet& stop_words) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& doc : documents) {
    for (auto& w : text::tokenize(doc, stop_words).filtered_words) ++counts[std::move(w)];
  }
  std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  return out;
}

std::size_t frequent_word_quota(double fraction, std::size_t vocabulary_size) {
  // The tolerance keeps products such as 0.07 * 100 = 7.000000000000001 at 7.
  const double x = fraction * static_cast<double>(vocabulary_size);
  return std::min(vocabulary_size, static_cast<std::size_t>(std::ceil(x - 1e-9)));
}

text::FrequentWordSet build_frequent_words(std::span<const std::string> documents, double fraction,
                                           const text::WordSet& stop_words) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("frequent-word fraction must lie in (0, 1]");
  }
  const auto freq = content_word_frequencies(documents, stop_words);
  if (freq.empty()) throw std::invalid_argument("corpus has no content words");
  const std::size_t quota = frequent_word_quota(fraction, freq.size());
  text::WordSet words;
  for (std::size_t i = 0; i < quota; ++i) words.insert(freq[i].first);
  return text::FrequentWordSet(std::move(words), fraction);
}

}  // namespace taletailor::corpus
