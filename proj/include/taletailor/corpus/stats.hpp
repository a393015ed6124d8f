#pragma once

#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace taletailor::corpus {

struct CorpusStats {
  std::vector<std::size_t> sentence_counts;                   // per story
  std::map<std::size_t, std::size_t> sentence_histogram;      // sentences -> stories
  std::vector<std::pair<std::string, std::size_t>> frequencies;  // lowercased words, desc
  std::size_t total_tokens = 0;
  double hapax_fraction = 0.0;  // share of the vocabulary seen exactly once

  double mean_sentences() const;
  std::size_t vocabulary_size() const { return frequencies.size(); }
};

/// Throws std::invalid_argument on an empty corpus.
CorpusStats corpus_stats(std::span<const std::string> stories);

/// Plot-ready TSV: a summary block then the sentence-count histogram.
void write_stats_tsv(std::ostream& out, const CorpusStats& stats);

/// word TAB count, most frequent first.
void write_frequency_tsv(std::ostream& out, const CorpusStats& stats);

}  // namespace taletailor::corpus
