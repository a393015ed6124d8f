#include <limits>
#include <stdexcept>

#include "taletailor/gen/provider.hpp"

namespace taletailor::gen {

namespace {
constexpr TokenId kUnknown = std::numeric_limits<TokenId>::max();
}

NGramProvider::NGramProvider(std::shared_ptr<const NGramModel> model) : model_(std::move(model)) {
  if (!model_) throw std::invalid_argument("NGramProvider needs a model");
}

NGramProvider::TokenTrace NGramProvider::generate(const std::string& context,
                                                  const GeneratorConfig& config,
                                                  std::uint64_t candidate_index) const {
  config.validate();
  std::vector<TokenId> history{model_->eos_id()};
  for (const auto& tok : model_tokens(context)) {
    const auto id = model_->token_id(tok);
    if (id && *id == model_->eos_id() && history.back() == *id) continue;
    history.push_back(id.value_or(kUnknown));
  }

  CounterRng rng = CounterRng(config.seed).split(candidate_index);
  const auto window = static_cast<std::size_t>(model_->order() - 1);
  TokenTrace trace;
  std::vector<double> probs;
  for (int step = 0; step < config.max_tokens; ++step) {
    std::size_t begin = history.size() - std::min(window, history.size());
    for (std::size_t i = history.size(); i > begin; --i) {
      if (history[i - 1] == kUnknown) {
        begin = i;
        break;
      }
    }
    const auto dist = model_->conditional_ids(
        std::span<const TokenId>(history.data() + begin, history.size() - begin));
    if (dist.empty()) break;
    probs.resize(dist.size());
    for (std::size_t i = 0; i < dist.size(); ++i) probs[i] = dist[i].second;
    const TokenId next = dist[sample(probs, config, rng)].first;
    if (next == model_->eos_id()) {
      trace.hit_end_of_sentence = true;
      break;
    }
    history.push_back(next);
    trace.tokens.push_back(model_->vocabulary()[next]);
  }
  return trace;
}

CompletionResponse NGramProvider::complete(const CompletionRequest& request) const {
  if (request.n_candidates < 0) throw std::invalid_argument("n_candidates must be nonnegative");
  CompletionResponse response;
  response.candidates.reserve(static_cast<std::size_t>(request.n_candidates));
  for (int i = 0; i < request.n_candidates; ++i) {
    const auto trace = generate(request.context, request.config, static_cast<std::uint64_t>(i));
    response.candidates.push_back(detokenize(trace.tokens));
  }
  return response;
}

std::vector<std::string> NGramProvider::tokenize(std::string_view text) const {
  std::vector<std::string> tokens{std::string(kEndOfSentence)};
  for (auto& tok : model_tokens(text)) {
    if (tok == kEndOfSentence && tokens.back() == kEndOfSentence) continue;
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

text::LogitTable NGramProvider::logits(std::span<const std::string> tokens) const {
  if (tokens.empty()) throw std::invalid_argument("logits need at least one token");
  text::LogitTable table;
  table.vocabulary = model_->vocabulary();
  table.distributions.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    table.distributions.push_back(model_->distribution(tokens.first(i + 1)));
  }
  return table;
}

}  // namespace taletailor::gen
