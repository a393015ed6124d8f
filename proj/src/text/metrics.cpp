#include "taletailor/text/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

namespace taletailor::text {

FrequentWordSet::FrequentWordSet(WordSet words, double source_fraction)
    : source_fraction_(source_fraction) {
  for (const auto& w : words) words_.insert(to_lower(w));
}

FrequentWordSet FrequentWordSet::load(const std::filesystem::path& path) {
  return FrequentWordSet(load_word_list(path));
}

void FrequentWordSet::save(const std::filesystem::path& path) const {
  std::vector<std::string> sorted(words_.begin(), words_.end());
  std::sort(sorted.begin(), sorted.end());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write word list: " + path.string());
  for (const auto& w : sorted) out << w << '\n';
}

bool FrequentWordSet::contains(std::string_view word) const {
  return words_.contains(to_lower(word));
}

ReadabilityBreakdown readability_breakdown(const TokenizedText& t) {
  ReadabilityBreakdown r;
  if (!t.words.empty()) {
    std::size_t chars = 0;
    for (const auto& w : t.words) chars += utf8_length(w);
    r.word_chars = static_cast<double>(chars) / static_cast<double>(t.words.size());
  }
  if (!t.sentences.empty()) {
    r.sent_words =
        static_cast<double>(t.words.size()) / static_cast<double>(t.sentences.size());
  }
  return r;
}

double readability(const TokenizedText& t) {
  const auto r = readability_breakdown(t);
  return 0.5 * r.word_chars + r.sent_words;
}

double positivity(const TokenizedText& t, const SentimentLexicon& lexicon) {
  if (t.filtered_words.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& w : t.filtered_words) {
    const Polarity p = lexicon.lookup(w);
    sum += p.positive - p.negative;
  }
  return sum / static_cast<double>(t.filtered_words.size());
}

double diversity(const TokenizedText& t) {
  if (t.filtered_words.empty()) return 0.0;
  const std::unordered_set<std::string> unique(t.filtered_words.begin(), t.filtered_words.end());
  return static_cast<double>(unique.size()) / static_cast<double>(t.filtered_words.size());
}

double simplicity(const TokenizedText& t, const FrequentWordSet& frequent) {
  const std::unordered_set<std::string> unique(t.filtered_words.begin(), t.filtered_words.end());
  std::size_t hits = 0;
  for (const auto& w : unique) {
    if (frequent.contains(w)) ++hits;
  }
  return static_cast<double>(hits);
}

std::vector<double> min_max_normalize(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("min_max_normalize: empty batch");
  for (double s : scores) {
    if (!std::isfinite(s)) throw std::invalid_argument("min_max_normalize: non-finite score");
  }
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  const double min = *lo;
  const double range = *hi - min;
  std::vector<double> out(scores.size(), 0.5);
  if (range > 0.0) {
    for (std::size_t i = 0; i < scores.size(); ++i) {
      out[i] = (scores[i] - min) / range;
    }
  }
  return out;
}

}  // namespace taletailor::text
