#include "taletailor/corpus/extracts.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "taletailor/gen/ngram.hpp"

namespace taletailor::corpus {
namespace {

using gen::kEndOfSentence;

bool is_space(char c) { return c == ' ' || c == '\n' || c == '\t' || c == '\r'; }

struct Span {
  std::size_t begin;
  std::size_t end;
};

std::vector<Span> token_spans(std::string_view text) {
  std::vector<Span> spans;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    if (i == text.size()) break;
    const std::size_t b = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    spans.push_back({b, i});
  }
  return spans;
}

bool ends_sentence(std::string_view token) {
  std::size_t n = token.size();
  while (n > 0 && (token[n - 1] == '"' || token[n - 1] == '\'' || token[n - 1] == ')' ||
                   token[n - 1] == ']')) {
    --n;
  }
  return n > 0 && (token[n - 1] == '.' || token[n - 1] == '!' || token[n - 1] == '?');
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

std::size_t count_tokens(std::string_view text) { return token_spans(text).size(); }

std::vector<std::string> segment_extracts(std::string_view text, std::size_t limit) {
  if (limit == 0) throw std::invalid_argument("segment_extracts: limit must be positive");
  const auto spans = token_spans(text);
  std::vector<std::string> out;

  // Token index ranges [first, last) of the pieces.
  std::size_t piece_begin = 0;
  std::size_t piece_len = 0;
  auto flush = [&] {
    if (piece_len == 0) return;
    const std::size_t b = spans[piece_begin].begin;
    const std::size_t e = spans[piece_begin + piece_len - 1].end;
    out.emplace_back(text.substr(b, e - b));
    piece_begin += piece_len;
    piece_len = 0;
  };

  std::size_t sentence_begin = 0;
  for (std::size_t t = 0; t < spans.size(); ++t) {
    const bool last = t + 1 == spans.size();
    const std::string_view tok = text.substr(spans[t].begin, spans[t].end - spans[t].begin);
    if (!ends_sentence(tok) && !last) continue;
    std::size_t sentence_len = t + 1 - sentence_begin;
    if (piece_len + sentence_len > limit) flush();
    // Hard-split an oversized sentence; the remainder stays open.
    while (sentence_len > limit) {
      piece_len = limit;
      flush();
      sentence_len -= limit;
    }
    piece_len += sentence_len;
    sentence_begin = t + 1;
  }
  flush();
  return out;
}

std::string merge_prompt_story(std::string_view prompt, std::string_view story) {
  std::string out;
  const auto p = strip(prompt);
  const auto s = strip(story);
  if (!p.empty()) {
    out.append(p);
    out.push_back(' ');
  }
  out.append(kEndOfSentence);
  out.push_back(' ');
  out.append(s);
  out.push_back(' ');
  out.append(kEndOfSentence);
  return out;
}

std::pair<std::string, std::string> split_prompt_story(std::string_view sample) {
  const auto first = sample.find(kEndOfSentence);
  if (first == std::string_view::npos) {
    throw std::invalid_argument("training sample has no sentinel");
  }
  const auto rest = sample.substr(first + kEndOfSentence.size());
  const auto second = rest.find(kEndOfSentence);
  if (second == std::string_view::npos ||
      !strip(rest.substr(second + kEndOfSentence.size())).empty()) {
    throw std::invalid_argument("training sample must end with its second sentinel");
  }
  return {std::string(strip(sample.substr(0, first))), std::string(strip(rest.substr(0, second)))};
}

CleanExtract make_extract(std::string prompt, std::string_view story) {
  CleanExtract e;
  e.prompt = std::move(prompt);
  const auto s = strip(story);
  e.body = std::string(s) + " " + std::string(kEndOfSentence);
  e.token_count = count_tokens(s);
  return e;
}

std::string extract_story(const CleanExtract& extract) {
  std::string_view body = extract.body;
  if (body.ends_with(kEndOfSentence)) body.remove_suffix(kEndOfSentence.size());
  return std::string(strip(body));
}

std::string training_sample(const CleanExtract& extract) {
  return merge_prompt_story(extract.prompt, extract_story(extract));
}

std::vector<std::string> validate_extract(const CleanExtract& extract,
                                          const text::WordSet& offensive, std::size_t limit) {
  std::vector<std::string> problems;
  if (!extract.body.ends_with(" " + std::string(kEndOfSentence))) {
    problems.emplace_back("body does not end with the sentinel");
  }
  const std::string story = extract_story(extract);
  const std::size_t tokens = count_tokens(story);
  if (tokens > limit) problems.emplace_back("extract exceeds the token limit");
  if (tokens != extract.token_count) problems.emplace_back("token_count does not match the body");
  if (story.find(kEndOfSentence) != std::string::npos) {
    problems.emplace_back("sentinel inside the story text");
  }
  for (const std::string* field : {&extract.prompt, &story}) {
    for (const char c : *field) {
      const auto u = static_cast<unsigned char>(c);
      if (u < 0x20 && c != '\n') {
        problems.emplace_back("control character in text");
        break;
      }
    }
    for (const auto& w : text::split_words(*field)) {
      if (offensive.contains(text::to_lower(w))) {
        problems.emplace_back("offensive word: " + w);
      }
    }
  }
  return problems;
}

std::string to_json_line(const CleanExtract& extract) {
  nlohmann::json j;
  j["body"] = extract.body;
  j["prompt"] = extract.prompt;
  j["token_count"] = extract.token_count;
  return j.dump();
}

CleanExtract from_json_line(std::string_view line) {
  const auto j = nlohmann::json::parse(line);
  CleanExtract e;
  e.body = j.at("body").get<std::string>();
  e.prompt = j.at("prompt").get<std::string>();
  e.token_count = j.at("token_count").get<std::size_t>();
  return e;
}

void write_corpus_jsonl(std::ostream& out, std::span<const CleanExtract> extracts) {
  for (const auto& e : extracts) out << to_json_line(e) << '\n';
}

void write_corpus_jsonl(const std::filesystem::path& path, std::span<const CleanExtract> extracts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_corpus_jsonl(out, extracts);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<CleanExtract> read_corpus_jsonl(std::istream& in) {
  std::vector<CleanExtract> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (strip(line).empty()) continue;
    try {
      out.push_back(from_json_line(line));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("corpus line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<CleanExtract> read_corpus_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return read_corpus_jsonl(in);
}

std::vector<std::vector<std::string>> training_sequences(std::span<const CleanExtract> extracts) {
  std::vector<std::vector<std::string>> out;
  out.reserve(extracts.size());
  for (const auto& e : extracts) out.push_back(gen::model_tokens(training_sample(e)));
  return out;
}

}  // namespace taletailor::corpus
