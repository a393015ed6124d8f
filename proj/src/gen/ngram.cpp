#include "taletailor/gen/ngram.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <map>
#include <set>
#include <stdexcept>

#include "taletailor/text/tokenize.hpp"

namespace taletailor::gen {

namespace {

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool word_byte(char c) { return text::is_word_byte(static_cast<unsigned char>(c)); }

void push_eos(std::vector<std::string>& out) {
  if (out.empty() || out.back() != kEndOfSentence) out.emplace_back(kEndOfSentence);
}

}  // namespace

std::vector<std::string> model_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (is_space(c)) {
      ++i;
    } else if (s.substr(i, kEndOfSentence.size()) == kEndOfSentence) {
      push_eos(out);
      i += kEndOfSentence.size();
    } else if (word_byte(c)) {
      std::size_t j = i;
      while (j < s.size()) {
        if (word_byte(s[j])) {
          ++j;
        } else if (s[j] == '\'' && j + 1 < s.size() && word_byte(s[j + 1])) {
          j += 2;
        } else {
          break;
        }
      }
      out.emplace_back(s.substr(i, j - i));
      i = j;
    } else if (is_terminator(c)) {
      std::size_t j = i;
      while (j < s.size() && is_terminator(s[j])) out.emplace_back(1, s[j++]);
      while (j < s.size() && is_closer(s[j])) out.emplace_back(1, s[j++]);
      if (j == s.size() || is_space(s[j])) push_eos(out);
      i = j;
    } else {
      out.emplace_back(1, c);
      ++i;
    }
  }
  return out;
}

std::string detokenize(std::span<const std::string> tokens) {
  static const std::set<std::string, std::less<>> kAttachLeft = {".", ",", ";", ":", "!",
                                                                  "?", ")", "]"};
  std::string out;
  bool attach_next = false;
  for (const auto& tok : tokens) {
    if (tok == kEndOfSentence) continue;
    if (!out.empty() && !attach_next && !kAttachLeft.contains(tok)) out.push_back(' ');
    out += tok;
    attach_next = tok == "(" || tok == "[";
  }
  return out;
}

std::string NGramModel::key_of(std::span<const TokenId> context) {
  std::string key(context.size() * sizeof(TokenId), '\0');
  if (!context.empty()) std::memcpy(key.data(), context.data(), key.size());
  return key;
}

NGramModel NGramModel::train(const std::vector<std::vector<std::string>>& corpus, int order) {
  if (order < 1) throw std::invalid_argument("n-gram order must be at least 1");

  NGramModel model;
  model.order_ = order;
  std::set<std::string, std::less<>> vocab{std::string(kEndOfSentence)};
  std::size_t targets = 0;
  for (const auto& seq : corpus) {
    vocab.insert(seq.begin(), seq.end());
    targets += seq.size();
  }
  if (targets == 0) throw std::invalid_argument("cannot train an n-gram model on an empty corpus");

  model.vocabulary_.assign(vocab.begin(), vocab.end());
  for (TokenId i = 0; i < model.vocabulary_.size(); ++i) model.ids_[model.vocabulary_[i]] = i;
  model.eos_id_ = model.ids_.at(std::string(kEndOfSentence));

  const auto n_lengths = static_cast<std::size_t>(order);
  std::vector<std::unordered_map<std::string, std::map<TokenId, std::uint64_t>>> raw(n_lengths);
  std::vector<TokenId> augmented;
  for (const auto& seq : corpus) {
    augmented.assign(1, model.eos_id_);
    for (const auto& tok : seq) augmented.push_back(model.ids_.at(tok));
    for (std::size_t i = 1; i < augmented.size(); ++i) {
      for (std::size_t len = 0; len < n_lengths && len <= i; ++len) {
        const std::span<const TokenId> ctx(augmented.data() + (i - len), len);
        ++raw[len][key_of(ctx)][augmented[i]];
      }
    }
  }

  model.contexts_.resize(n_lengths);
  for (std::size_t len = 0; len < n_lengths; ++len) {
    auto& dest = model.contexts_[len];
    dest.reserve(raw[len].size());
    for (auto& [key, next] : raw[len]) {
      ContextCounts cc;
      cc.next.assign(next.begin(), next.end());
      for (const auto& [id, count] : cc.next) cc.total += count;
      dest.emplace(key, std::move(cc));
    }
  }
  return model;
}

std::optional<TokenId> NGramModel::token_id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const NGramModel::ContextCounts* NGramModel::find(std::span<const TokenId> context) const {
  if (context.size() >= contexts_.size()) return nullptr;
  const auto& table = contexts_[context.size()];
  auto it = table.find(key_of(context));
  return it == table.end() ? nullptr : &it->second;
}

SparseDistribution NGramModel::conditional_ids(std::span<const TokenId> history) const {
  std::size_t len = std::min(history.size(), static_cast<std::size_t>(order_ - 1));
  while (true) {
    if (const auto* cc = find(history.subspan(history.size() - len))) {
      SparseDistribution out;
      out.reserve(cc->next.size());
      const auto total = static_cast<double>(cc->total);
      for (const auto& [id, count] : cc->next) {
        out.emplace_back(id, static_cast<double>(count) / total);
      }
      return out;
    }
    if (len == 0) return {};
    --len;
  }
}

std::vector<double> NGramModel::distribution(std::span<const std::string> history) const {
  // Longest suffix made only of known tokens.
  std::vector<TokenId> known;
  const std::size_t window = std::min(history.size(), static_cast<std::size_t>(order_ - 1));
  for (std::size_t i = history.size(); i > history.size() - window; --i) {
    auto id = token_id(history[i - 1]);
    if (!id) break;
    known.push_back(*id);
  }
  std::reverse(known.begin(), known.end());

  std::vector<double> dense(vocabulary_.size(), 0.0);
  for (const auto& [id, p] : conditional_ids(known)) dense[id] = p;
  return dense;
}

std::optional<std::vector<std::pair<TokenId, std::uint64_t>>> NGramModel::counts(
    std::span<const std::string> context) const {
  std::vector<TokenId> ids;
  for (const auto& tok : context) {
    auto id = token_id(tok);
    if (!id) return std::nullopt;
    ids.push_back(*id);
  }
  const auto* cc = find(ids);
  if (!cc) return std::nullopt;
  return cc->next;
}

std::size_t NGramModel::context_count() const {
  std::size_t n = 0;
  for (const auto& table : contexts_) n += table.size();
  return n;
}

}  // namespace taletailor::gen
