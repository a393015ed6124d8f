#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace taletailor::text {

using WordSet = std::unordered_set<std::string>;

/// A text split into sentences and words.
///
/// Words are maximal runs of letters and digits (any non-ASCII byte counts as
/// a letter so UTF-8 words stay intact) with internal apostrophes allowed, so
/// punctuation never forms a word. `filtered_words` are the lowercased words
/// minus stop words, in text order; `sentence_terms` groups them by sentence.
struct TokenizedText {
  std::string raw;
  std::vector<std::string> sentences;
  std::vector<std::string> words;
  std::vector<std::string> filtered_words;
  std::vector<std::vector<std::string>> sentence_terms;
};

/// Built-in English stop-word list (shipped as data/stopwords.txt).
const WordSet& default_stop_words();

/// One word per line, trimmed and lowercased; blank lines and '#' comments skipped.
WordSet parse_word_list(std::string_view contents);
WordSet load_word_list(const std::filesystem::path& path);

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

/// Number of UTF-8 code points.
std::size_t utf8_length(std::string_view s);

bool is_word_byte(unsigned char c);

/// Splits after runs of '.', '!' or '?' (plus any closing quotes or brackets)
/// that are followed by whitespace or end of input. Sentences are trimmed;
/// empty ones dropped.
std::vector<std::string> split_sentences(std::string_view raw);

std::vector<std::string> split_words(std::string_view raw);

TokenizedText tokenize(std::string_view raw,
                       const WordSet& stop_words = default_stop_words());

}  // namespace taletailor::text
