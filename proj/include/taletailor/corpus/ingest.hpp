#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "taletailor/corpus/extracts.hpp"
#include "taletailor/text/lexicon.hpp"

namespace taletailor::corpus {

enum class SourceFormat { kGutenberg, kReddit };

SourceFormat parse_source_format(std::string_view s);

struct RawStory {
  SourceFormat source = SourceFormat::kGutenberg;
  std::optional<std::string> prompt;
  std::string body;
};

/// Maps a story text to [0, 1], 1 being most positive.
using SentimentScorer = std::function<double(std::string_view)>;

/// (1 + mean lexicon positivity) / 2.
SentimentScorer lexicon_sentiment_scorer(std::shared_ptr<const text::SentimentLexicon> lexicon);

/// Stories scoring strictly above `threshold`, in input order. A story whose
/// scorer throws or returns a value outside [0, 1] is dropped and logged.
std::vector<RawStory> filter_by_sentiment(std::vector<RawStory> stories,
                                          const SentimentScorer& scorer,
                                          double threshold = 0.9);

/// Gutenberg: every regular file in `src` (sorted by name) is one story.
/// Reddit: "*.tsv" files hold "prompt TAB story" lines; other files are
/// single prompt-less stories. Stories with an empty body are skipped.
std::vector<RawStory> load_raw_stories(const std::filesystem::path& src, SourceFormat format);

struct IngestOptions {
  text::WordSet offensive;
  std::size_t extract_limit = kExtractTokenLimit;
  std::size_t reddit_max_words = 1000;
  std::size_t keyword_count = 5;
  double sentiment_threshold = 0.9;
  /// Applied to Reddit stories only; no filtering when empty.
  SentimentScorer sentiment;
};

/// Clean, filter, segment and prompt. Stories are cleaned in parallel;
/// keyword statistics are gathered over all extracts afterwards. Every
/// emitted extract passes validate_extract.
std::vector<CleanExtract> ingest(std::vector<RawStory> stories, const IngestOptions& options);

}  // namespace taletailor::corpus
