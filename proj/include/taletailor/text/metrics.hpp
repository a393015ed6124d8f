#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "taletailor/text/lexicon.hpp"
#include "taletailor/text/tokenize.hpp"

namespace taletailor::text {

/// Readability substitute for an undefined mean (no words / no sentences).
inline constexpr double kReadabilityEmptyPenalty = -10.0;

struct ReadabilityBreakdown {
  double word_chars = kReadabilityEmptyPenalty;  // mean code points per word
  double sent_words = kReadabilityEmptyPenalty;  // mean words per sentence
};

/// Precomputed characteristic words of the target corpus. Membership is
/// case-insensitive.
class FrequentWordSet {
 public:
  FrequentWordSet() = default;
  explicit FrequentWordSet(WordSet words, double source_fraction = 0.07);

  static FrequentWordSet load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  bool contains(std::string_view word) const;
  std::size_t size() const { return words_.size(); }
  const WordSet& words() const { return words_; }
  double source_fraction() const { return source_fraction_; }

 private:
  WordSet words_;
  double source_fraction_ = 0.07;
};

ReadabilityBreakdown readability_breakdown(const TokenizedText& t);

/// 0.5 * word_chars + sent_words.
double readability(const TokenizedText& t);

/// Mean of (positive - negative) over filtered words; 0 when there are none.
double positivity(const TokenizedText& t, const SentimentLexicon& lexicon);

/// |set(filtered)| / |filtered|, or 0 when nothing survives filtering.
double diversity(const TokenizedText& t);

/// |set(filtered) ∩ frequent words|. An un-normalized count.
double simplicity(const TokenizedText& t, const FrequentWordSet& frequent);

/// Maximum LSA rank used by coherency.
inline constexpr std::size_t kMaxLsaRank = 32;

/// Sum of LSA cosine similarities between the first sentence and each later
/// one. Sentence x term tf-idf (raw tf, idf = 1 + ln(n/df)) is projected to
/// rank min(#sentences, #terms, 32) by truncated SVD. 0 for fewer than two
/// sentences.
double coherency(const TokenizedText& t);

/// Maps each score to (x - min) / (max - min); a constant batch maps to 0.5.
/// Throws std::invalid_argument on an empty or non-finite batch.
std::vector<double> min_max_normalize(std::span<const double> scores);

}  // namespace taletailor::text
