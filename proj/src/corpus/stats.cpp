#include "taletailor/corpus/stats.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "taletailor/text/tokenize.hpp"

namespace taletailor::corpus {

double CorpusStats::mean_sentences() const {
  if (sentence_counts.empty()) return 0.0;
  const auto total = std::accumulate(sentence_counts.begin(), sentence_counts.end(), std::size_t{0});
  return static_cast<double>(total) / static_cast<double>(sentence_counts.size());
}

CorpusStats corpus_stats(std::span<const std::string> stories) {
  if (stories.empty()) throw std::invalid_argument("corpus_stats: empty corpus");
  CorpusStats s;
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& story : stories) {
    const std::size_t n = text::split_sentences(story).size();
    s.sentence_counts.push_back(n);
    ++s.sentence_histogram[n];
    for (const auto& w : text::split_words(story)) {
      ++counts[text::to_lower(w)];
      ++s.total_tokens;
    }
  }
  s.frequencies.assign(counts.begin(), counts.end());
  std::sort(s.frequencies.begin(), s.frequencies.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (!s.frequencies.empty()) {
    const auto hapax = std::count_if(s.frequencies.begin(), s.frequencies.end(),
                                     [](const auto& p) { return p.second == 1; });
    s.hapax_fraction = static_cast<double>(hapax) / static_cast<double>(s.frequencies.size());
  }
  return s;
}

void write_stats_tsv(std::ostream& out, const CorpusStats& stats) {
  out << "stat\tvalue\n";
  out << "stories\t" << stats.sentence_counts.size() << '\n';
  out << "tokens\t" << stats.total_tokens << '\n';
  out << "vocabulary\t" << stats.vocabulary_size() << '\n';
  out << "hapax_fraction\t" << stats.hapax_fraction << '\n';
  out << "mean_sentences\t" << stats.mean_sentences() << '\n';
  out << '\n' << "sentences\tstories\n";
  for (const auto& [n, count] : stats.sentence_histogram) out << n << '\t' << count << '\n';
}

void write_frequency_tsv(std::ostream& out, const CorpusStats& stats) {
  out << "word\tcount\n";
  for (const auto& [w, c] : stats.frequencies) out << w << '\t' << c << '\n';
}

}  // namespace taletailor::corpus
