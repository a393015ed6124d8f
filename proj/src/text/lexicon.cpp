#include "taletailor/text/lexicon.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "taletailor/text/tokenize.hpp"

namespace taletailor::text {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  return fields;
}

double parse_score(std::string_view field, std::size_t line_no) {
  field = trim(field);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !(value >= 0.0) ||
      !(value <= 1.0)) {
    throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                             ": score out of [0,1] or unparsable: '" + std::string(field) + "'");
  }
  return value;
}

std::string key_with_pos(std::string_view word, char pos) {
  std::string key = to_lower(word);
  key.push_back('#');
  key.push_back(pos);
  return key;
}

}  // namespace

SentimentLexicon SentimentLexicon::parse_sentiwordnet(std::istream& in) {
  SentimentLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#' || trim(line).empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() < 5) {
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": expected at least 5 tab-separated fields");
    }
    if (fields[0].size() != 1) {
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": bad part-of-speech field");
    }
    const char pos = fields[0][0];
    const Polarity scores{parse_score(fields[2], line_no), parse_score(fields[3], line_no)};
    // SynsetTerms: space-separated "term#sense" entries.
    std::string_view terms = fields[4];
    std::size_t p = 0;
    while (p < terms.size()) {
      std::size_t sp = terms.find(' ', p);
      if (sp == std::string_view::npos) sp = terms.size();
      std::string_view term = terms.substr(p, sp - p);
      if (auto hash = term.rfind('#'); hash != std::string_view::npos) term = term.substr(0, hash);
      if (!term.empty()) lex.add(term, pos, scores);
      p = sp + 1;
    }
  }
  return lex;
}

SentimentLexicon SentimentLexicon::load_sentiwordnet(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon: " + path.string());
  return parse_sentiwordnet(in);
}

void SentimentLexicon::add(std::string_view word, char part_of_speech, Polarity scores) {
  if (!(scores.positive >= 0.0 && scores.positive <= 1.0 && scores.negative >= 0.0 &&
        scores.negative <= 1.0)) {
    throw std::invalid_argument("lexicon scores must lie in [0,1]");
  }
  auto& w = by_word_[to_lower(word)];
  w.positive += scores.positive;
  w.negative += scores.negative;
  ++w.count;
  auto& wp = by_word_pos_[key_with_pos(word, part_of_speech)];
  wp.positive += scores.positive;
  wp.negative += scores.negative;
  ++wp.count;
}

Polarity SentimentLexicon::mean(const Accumulator& acc) {
  if (acc.count == 0) return {};
  const auto n = static_cast<double>(acc.count);
  return {acc.positive / n, acc.negative / n};
}

Polarity SentimentLexicon::lookup(std::string_view word) const {
  auto it = by_word_.find(to_lower(word));
  return it == by_word_.end() ? Polarity{} : mean(it->second);
}

Polarity SentimentLexicon::lookup(std::string_view word, char part_of_speech) const {
  auto it = by_word_pos_.find(key_with_pos(word, part_of_speech));
  return it == by_word_pos_.end() ? Polarity{} : mean(it->second);
}

}  // namespace taletailor::text
