#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "taletailor/text/tokenize.hpp"

namespace taletailor::corpus {

inline constexpr std::size_t kExtractTokenLimit = 500;

/// One training extract. `body` is the story text followed by " <|eos|>";
/// `token_count` counts its whitespace words, sentinel excluded.
struct CleanExtract {
  std::string prompt;
  std::string body;
  std::size_t token_count = 0;

  friend bool operator==(const CleanExtract&, const CleanExtract&) = default;
};

/// Whitespace-delimited word count.
std::size_t count_tokens(std::string_view text);

/// Greedy split at sentence boundaries into pieces of at most `limit`
/// whitespace tokens; a longer sentence is hard-split every `limit` tokens.
/// Each piece is the original substring from its first to its last token.
std::vector<std::string> segment_extracts(std::string_view text,
                                          std::size_t limit = kExtractTokenLimit);

/// "prompt <|eos|> story <|eos|>" (no leading space for an empty prompt).
std::string merge_prompt_story(std::string_view prompt, std::string_view story);

/// Inverse of merge_prompt_story. Throws std::invalid_argument if the sample
/// does not hold exactly two sentinels with the second at the end.
std::pair<std::string, std::string> split_prompt_story(std::string_view sample);

CleanExtract make_extract(std::string prompt, std::string_view story);

/// The story text without the trailing sentinel.
std::string extract_story(const CleanExtract& extract);

/// merge_prompt_story(prompt, story) for the extract.
std::string training_sample(const CleanExtract& extract);

/// Invariant violations (empty when valid): token limit, control
/// characters, offensive words, missing trailing sentinel.
std::vector<std::string> validate_extract(const CleanExtract& extract,
                                          const text::WordSet& offensive,
                                          std::size_t limit = kExtractTokenLimit);

std::string to_json_line(const CleanExtract& extract);
CleanExtract from_json_line(std::string_view line);

void write_corpus_jsonl(std::ostream& out, std::span<const CleanExtract> extracts);
void write_corpus_jsonl(const std::filesystem::path& path, std::span<const CleanExtract> extracts);
std::vector<CleanExtract> read_corpus_jsonl(std::istream& in);
std::vector<CleanExtract> read_corpus_jsonl(const std::filesystem::path& path);

/// Model-token sequences of every training sample.
std::vector<std::vector<std::string>> training_sequences(std::span<const CleanExtract> extracts);

}  // namespace taletailor::corpus
