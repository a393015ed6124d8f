#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>

#include "taletailor/text/tokenize.hpp"

namespace taletailor::corpus {

inline constexpr std::size_t kNoWordLimit = std::numeric_limits<std::size_t>::max();

/// Normalizes raw story text:
///  - characters outside ASCII letters/digits, . , ; : ! ? ' " ( ) -, Latin
///    letters U+00C0-U+024F, space and newline become spaces (typographic
///    quotes, dashes and ellipses map to their ASCII forms first);
///  - words in `offensive` are removed whole-word, case-insensitively;
///  - spaces collapse, lines are trimmed and blank lines dropped;
///  - the result is cut after the first `max_words` whitespace words.
/// Idempotent.
std::string clean_text(std::string_view raw, const text::WordSet& offensive,
                       std::size_t max_words = 1000);

/// Keeps the text between the Project Gutenberg START and END marker lines.
/// Text without markers is returned unchanged.
std::string strip_gutenberg_boilerplate(std::string_view raw);

}  // namespace taletailor::corpus
