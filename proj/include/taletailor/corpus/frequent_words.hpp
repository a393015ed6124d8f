#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "taletailor/text/metrics.hpp"
#include "taletailor/text/tokenize.hpp"

namespace taletailor::corpus {

/// Content-word (stop words removed, lowercased) counts, most frequent first,
/// ties alphabetical.
std::vector<std::pair<std::string, std::size_t>> content_word_frequencies(
    std::span<const std::string> documents,
    const text::WordSet& stop_words = text::default_stop_words());

/// Number of words kept for a vocabulary of `vocabulary_size`: ceil(fraction * size).
std::size_t frequent_word_quota(double fraction, std::size_t vocabulary_size);

/// The ceil(fraction * |V|) most frequent content words. Throws
/// std::invalid_argument on an empty corpus or fraction outside (0, 1].
text::FrequentWordSet build_frequent_words(
    std::span<const std::string> documents, double fraction = 0.07,
    const text::WordSet& stop_words = text::default_stop_words());

}  // namespace taletailor::corpus
