#include "taletailor/text/tokenize.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace taletailor::text {

namespace detail {
extern const std::string_view kStopWordsData;
}

namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

}  // namespace

const WordSet& default_stop_words() {
  static const WordSet words = parse_word_list(detail::kStopWordsData);
  return words;
}

WordSet parse_word_list(std::string_view contents) {
  WordSet out;
  std::size_t pos = 0;
  while (pos <= contents.size()) {
    std::size_t end = contents.find('\n', pos);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = trim(contents.substr(pos, end - pos));
    if (!line.empty() && line.front() != '#') out.insert(to_lower(line));
    pos = end + 1;
  }
  return out;
}

WordSet load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open word list: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_word_list(buf.str());
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  while (b < s.size() && is_space(static_cast<unsigned char>(s[b]))) ++b;
  std::size_t e = s.size();
  while (e > b && is_space(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

bool is_word_byte(unsigned char c) { return c >= 0x80 || std::isalnum(c) != 0; }

std::vector<std::string> split_sentences(std::string_view raw) {
  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t i = 0;
  auto flush = [&](std::size_t end) {
    std::string_view piece = trim(raw.substr(start, end - start));
    if (!piece.empty()) out.emplace_back(piece);
    start = end;
  };
  while (i < raw.size()) {
    if (!is_terminator(raw[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < raw.size() && is_terminator(raw[j])) ++j;
    while (j < raw.size() && is_closer(raw[j])) ++j;
    if (j == raw.size() || is_space(static_cast<unsigned char>(raw[j]))) flush(j);
    i = j;
  }
  flush(raw.size());
  return out;
}

std::vector<std::string> split_words(std::string_view raw) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < raw.size()) {
    if (!is_word_byte(static_cast<unsigned char>(raw[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < raw.size()) {
      auto c = static_cast<unsigned char>(raw[j]);
      if (is_word_byte(c)) {
        ++j;
      } else if (c == '\'' && j + 1 < raw.size() &&
                 is_word_byte(static_cast<unsigned char>(raw[j + 1]))) {
        j += 2;
      } else {
        break;
      }
    }
    out.emplace_back(raw.substr(i, j - i));
    i = j;
  }
  return out;
}

TokenizedText tokenize(std::string_view raw, const WordSet& stop_words) {
  TokenizedText t;
  t.raw = std::string(raw);
  t.sentences = split_sentences(raw);
  t.sentence_terms.reserve(t.sentences.size());
  for (const auto& sentence : t.sentences) {
    std::vector<std::string> terms;
    for (auto& word : split_words(sentence)) {
      std::string lower = to_lower(word);
      t.words.push_back(std::move(word));
      if (!stop_words.contains(lower)) {
        t.filtered_words.push_back(lower);
        terms.push_back(std::move(lower));
      }
    }
    t.sentence_terms.push_back(std::move(terms));
  }
  return t;
}

}  // namespace taletailor::text
