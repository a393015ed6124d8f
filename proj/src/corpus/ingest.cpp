#include "taletailor/corpus/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "taletailor/corpus/clean.hpp"
#include "taletailor/corpus/keywords.hpp"
#include "taletailor/text/metrics.hpp"

namespace taletailor::corpus {
namespace fs = std::filesystem;

SourceFormat parse_source_format(std::string_view s) {
  if (s == "gutenberg") return SourceFormat::kGutenberg;
  if (s == "reddit") return SourceFormat::kReddit;
  throw std::invalid_argument("unknown source format: " + std::string(s));
}

SentimentScorer lexicon_sentiment_scorer(std::shared_ptr<const text::SentimentLexicon> lexicon) {
  if (!lexicon) throw std::invalid_argument("lexicon_sentiment_scorer: null lexicon");
  return [lexicon](std::string_view story) {
    return (1.0 + text::positivity(text::tokenize(story), *lexicon)) / 2.0;
  };
}

std::vector<RawStory> filter_by_sentiment(std::vector<RawStory> stories,
                                          const SentimentScorer& scorer, double threshold) {
  std::vector<RawStory> kept;
  for (std::size_t i = 0; i < stories.size(); ++i) {
    double score = 0.0;
    try {
      score = scorer(stories[i].body);
    } catch (const std::exception& e) {
      spdlog::warn("sentiment scorer failed on story {}: {}; story excluded", i, e.what());
      continue;
    }
    if (!std::isfinite(score) || score < 0.0 || score > 1.0) {
      spdlog::warn("sentiment score {} for story {} outside [0, 1]; story excluded", score, i);
      continue;
    }
    if (score > threshold) kept.push_back(std::move(stories[i]));
  }
  return kept;
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> source_files(const fs::path& src) {
  std::vector<fs::path> files;
  if (fs::is_regular_file(src)) {
    files.push_back(src);
  } else if (fs::is_directory(src)) {
    for (const auto& entry : fs::directory_iterator(src)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    throw std::runtime_error("no such source: " + src.string());
  }
  return files;
}

bool blank(std::string_view s) { return text::trim(s).empty(); }

}  // namespace

std::vector<RawStory> load_raw_stories(const fs::path& src, SourceFormat format) {
  std::vector<RawStory> stories;
  for (const auto& file : source_files(src)) {
    const std::string contents = read_file(file);
    if (format == SourceFormat::kReddit && file.extension() == ".tsv") {
      std::istringstream in(contents);
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        RawStory s{format, std::nullopt, {}};
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
          s.body = line;
        } else {
          s.prompt = line.substr(0, tab);
          s.body = line.substr(tab + 1);
        }
        if (!blank(s.body)) stories.push_back(std::move(s));
      }
    } else if (!blank(contents)) {
      stories.push_back({format, std::nullopt, contents});
    }
  }
  return stories;
}

std::vector<CleanExtract> ingest(std::vector<RawStory> stories, const IngestOptions& options) {
  const bool any_reddit = std::any_of(stories.begin(), stories.end(), [](const RawStory& s) {
    return s.source == SourceFormat::kReddit;
  });
  if (any_reddit && options.sentiment) {
    std::vector<RawStory> gutenberg;
    std::vector<RawStory> reddit;
    for (auto& s : stories) {
      (s.source == SourceFormat::kReddit ? reddit : gutenberg).push_back(std::move(s));
    }
    const std::size_t before = reddit.size();
    reddit = filter_by_sentiment(std::move(reddit), options.sentiment, options.sentiment_threshold);
    spdlog::info("sentiment filter kept {} of {} stories", reddit.size(), before);
    stories = std::move(gutenberg);
    std::move(reddit.begin(), reddit.end(), std::back_inserter(stories));
  }

  struct Prepared {
    std::string prompt;
    std::vector<std::string> pieces;
  };
  std::vector<Prepared> prepared(stories.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(stories.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const auto& s = stories[static_cast<std::size_t>(i)];
      auto& out = prepared[static_cast<std::size_t>(i)];
      std::string body;
      if (s.source == SourceFormat::kGutenberg) {
        body = clean_text(strip_gutenberg_boilerplate(s.body), options.offensive, kNoWordLimit);
      } else {
        body = clean_text(s.body, options.offensive, options.reddit_max_words);
      }
      if (s.prompt) {
        out.prompt = clean_text(*s.prompt, options.offensive, kNoWordLimit);
        std::replace(out.prompt.begin(), out.prompt.end(), '\n', ' ');
      }
      out.pieces = segment_extracts(body, options.extract_limit);
    } catch (...) {
#pragma omp critical(taletailor_ingest_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<std::string> all_pieces;
  for (const auto& p : prepared) all_pieces.insert(all_pieces.end(), p.pieces.begin(), p.pieces.end());
  const KeywordIndex keywords(all_pieces);

  std::vector<CleanExtract> out;
  out.reserve(all_pieces.size());
  for (const auto& p : prepared) {
    for (const auto& piece : p.pieces) {
      std::string prompt =
          p.prompt.empty() ? keyword_prompt(piece, keywords, options.keyword_count) : p.prompt;
      auto extract = make_extract(std::move(prompt), piece);
      const auto problems = validate_extract(extract, options.offensive, options.extract_limit);
      if (!problems.empty()) throw std::logic_error("ingest produced an invalid extract: " + problems.front());
      out.push_back(std::move(extract));
    }
  }
  return out;
}

}  // namespace taletailor::corpus
