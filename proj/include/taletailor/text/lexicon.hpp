#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>

namespace taletailor::text {

struct Polarity {
  double positive = 0.0;
  double negative = 0.0;
};

/// Word-level sentiment scores in the SentiWordNet 3.0 layout.
///
/// A word listed under several senses (or parts of speech) gets the mean of
/// its entries. Lookups are case-insensitive; absent words are neutral.
class SentimentLexicon {
 public:
  /// Tab-separated: POS, ID, PosScore, NegScore, SynsetTerms, Gloss.
  /// Lines starting with '#' and blank lines are ignored. Throws
  /// std::runtime_error naming the line on malformed input.
  static SentimentLexicon parse_sentiwordnet(std::istream& in);
  static SentimentLexicon load_sentiwordnet(const std::filesystem::path& path);

  void add(std::string_view word, char part_of_speech, Polarity scores);

  Polarity lookup(std::string_view word) const;
  Polarity lookup(std::string_view word, char part_of_speech) const;

  std::size_t size() const { return by_word_.size(); }
  bool empty() const { return by_word_.empty(); }

 private:
  struct Accumulator {
    double positive = 0.0;
    double negative = 0.0;
    std::size_t count = 0;
  };

  static Polarity mean(const Accumulator& acc);

  std::unordered_map<std::string, Accumulator> by_word_;
  std::unordered_map<std::string, Accumulator> by_word_pos_;
};

}  // namespace taletailor::text
