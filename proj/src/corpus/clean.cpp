#include "taletailor/corpus/clean.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>

namespace taletailor::corpus {
namespace {

constexpr std::string_view kAllowedPunctuation = ".,;:!?'\"()-";

// Decodes one code point starting at `i`; returns 0xFFFFFFFF for malformed
// input and advances `i` past what was consumed.
std::uint32_t decode_utf8(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  std::size_t len = 0;
  std::uint32_t cp = 0;
  if (b0 < 0x80) {
    ++i;
    return b0;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return 0xFFFFFFFF;
  }
  if (i + len > s.size()) {
    ++i;
    return 0xFFFFFFFF;
  }
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return 0xFFFFFFFF;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  // Overlong encodings are treated as malformed.
  static constexpr std::uint32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len]) {
    ++i;
    return 0xFFFFFFFF;
  }
  i += len;
  return cp;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    // Only Latin letters below U+0250 are ever re-encoded.
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_latin_letter(std::uint32_t cp) {
  return cp >= 0x00C0 && cp <= 0x024F && cp != 0x00D7 && cp != 0x00F7;
}

std::string normalize_characters(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    const std::uint32_t cp = decode_utf8(raw, i);
    if (cp < 0x80) {
      const char c = static_cast<char>(cp);
      if (c == '\r') continue;
      if (std::isalnum(static_cast<unsigned char>(c)) || c == ' ' || c == '\n' ||
          kAllowedPunctuation.find(c) != std::string_view::npos) {
        out.push_back(c);
      } else {
        out.push_back(' ');
      }
      continue;
    }
    switch (cp) {
      case 0x2018: case 0x2019: case 0x201A: case 0x201B: case 0x2032:
        out.push_back('\'');
        break;
      case 0x201C: case 0x201D: case 0x201E: case 0x201F: case 0x2033:
      case 0x00AB: case 0x00BB:
        out.push_back('"');
        break;
      case 0x2010: case 0x2011: case 0x2012: case 0x2013: case 0x2014: case 0x2015:
        out.push_back('-');
        break;
      case 0x2026:
        out += "...";
        break;
      default:
        if (is_latin_letter(cp)) {
          append_utf8(out, cp);
        } else {
          out.push_back(' ');
        }
    }
  }
  return out;
}

// Drops offensive words, keeping everything between them verbatim.
std::string remove_words(std::string_view s, const text::WordSet& offensive) {
  if (offensive.empty()) return std::string(s);
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (!text::is_word_byte(static_cast<unsigned char>(s[i]))) {
      out.push_back(s[i++]);
      continue;
    }
    // Same word rule as the tokenizer: internal apostrophes join.
    std::size_t j = i;
    while (j < s.size()) {
      if (text::is_word_byte(static_cast<unsigned char>(s[j]))) {
        ++j;
      } else if (s[j] == '\'' && j + 1 < s.size() &&
                 text::is_word_byte(static_cast<unsigned char>(s[j + 1]))) {
        ++j;
      } else {
        break;
      }
    }
    const std::string_view word = s.substr(i, j - i);
    if (!offensive.contains(text::to_lower(word))) out.append(word);
    i = j;
  }
  return out;
}

std::string normalize_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find('\n', start);
    if (end == std::string_view::npos) end = s.size();
    std::string line;
    bool pending_space = false;
    for (std::size_t i = start; i < end; ++i) {
      if (s[i] == ' ') {
        pending_space = !line.empty();
        continue;
      }
      if (pending_space) line.push_back(' ');
      pending_space = false;
      line.push_back(s[i]);
    }
    if (!line.empty()) {
      if (!out.empty()) out.push_back('\n');
      out += line;
    }
    start = end + 1;
  }
  return out;
}

std::string truncate_words(std::string s, std::size_t max_words) {
  if (max_words == kNoWordLimit) return s;
  std::size_t words = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\n')) ++i;
    if (i == s.size()) break;
    if (words == max_words) {
      // Cut before this word and drop the separator.
      s.resize(i);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\n')) s.pop_back();
      return s;
    }
    ++words;
    while (i < s.size() && s[i] != ' ' && s[i] != '\n') ++i;
  }
  return s;
}

bool starts_with_marker(std::string_view line, std::string_view kind) {
  // Matches "*** START OF THE PROJECT GUTENBERG ..." and variants.
  const std::string lower = text::to_lower(line);
  const auto stars = lower.find("***");
  if (stars == std::string::npos) return false;
  const auto pos = lower.find(kind, stars);
  return pos != std::string::npos && lower.find("project gutenberg", pos) != std::string::npos;
}

}  // namespace

std::string clean_text(std::string_view raw, const text::WordSet& offensive,
                       std::size_t max_words) {
  std::string s = normalize_characters(raw);
  s = remove_words(s, offensive);
  s = normalize_whitespace(s);
  return truncate_words(std::move(s), max_words);
}

std::string strip_gutenberg_boilerplate(std::string_view raw) {
  std::size_t body_begin = std::string_view::npos;
  std::size_t body_end = std::string_view::npos;
  std::size_t start = 0;
  while (start < raw.size()) {
    std::size_t end = raw.find('\n', start);
    if (end == std::string_view::npos) end = raw.size();
    const std::string_view line = raw.substr(start, end - start);
    if (body_begin == std::string_view::npos) {
      if (starts_with_marker(line, "start of")) body_begin = std::min(end + 1, raw.size());
    } else if (starts_with_marker(line, "end of")) {
      body_end = start;
      break;
    }
    start = end + 1;
  }
  if (body_begin == std::string_view::npos) return std::string(raw);
  if (body_end == std::string_view::npos) body_end = raw.size();
  return std::string(raw.substr(body_begin, body_end - body_begin));
}

}  // namespace taletailor::corpus
