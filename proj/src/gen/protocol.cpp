#include "taletailor/gen/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace taletailor::gen::protocol {

namespace {

const json& require(const json& body, const char* key) {
  if (!body.is_object() || !body.contains(key)) {
    throw std::invalid_argument(std::string("missing field '") + key + "'");
  }
  return body.at(key);
}

template <typename T>
T get_or(const json& body, const char* key, T fallback) {
  if (!body.is_object() || !body.contains(key) || body.at(key).is_null()) return fallback;
  try {
    return body.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("field '") + key + "' has the wrong type");
  }
}

std::vector<std::string> string_array(const json& value, const char* key) {
  if (!value.is_array()) throw std::invalid_argument(std::string("'") + key + "' must be an array");
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const auto& v : value) {
    if (!v.is_string()) {
      throw std::invalid_argument(std::string("'") + key + "' must hold strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

json completion_request_to_json(const CompletionRequest& request) {
  return json{{"context", request.context},
              {"n", request.n_candidates},
              {"mode", to_string(request.config.mode)},
              {"p", request.config.p},
              {"k", request.config.k},
              {"max_tokens", request.config.max_tokens},
              {"seed", request.config.seed}};
}

CompletionRequest completion_request_from_json(const json& body) {
  CompletionRequest r;
  const auto& context = require(body, "context");
  if (!context.is_string()) throw std::invalid_argument("'context' must be a string");
  r.context = context.get<std::string>();
  r.n_candidates = get_or<int>(body, "n", 3);
  r.config.mode = parse_sampling_mode(get_or<std::string>(body, "mode", "nucleus"));
  r.config.p = get_or<double>(body, "p", r.config.p);
  r.config.k = get_or<int>(body, "k", r.config.k);
  r.config.max_tokens = get_or<int>(body, "max_tokens", r.config.max_tokens);
  r.config.seed = get_or<std::uint64_t>(body, "seed", 0);
  if (r.n_candidates < 1) throw std::invalid_argument("'n' must be at least 1");
  r.config.validate();
  return r;
}

json completion_response_to_json(const CompletionResponse& response) {
  return json{{"candidates", response.candidates}};
}

CompletionResponse completion_response_from_json(const json& body) {
  return CompletionResponse{string_array(require(body, "candidates"), "candidates")};
}

std::string_view to_string(ModelRole role) {
  return role == ModelRole::kPreset ? "preset" : "finetuned";
}

ModelRole parse_model_role(std::string_view s) {
  if (s == "preset") return ModelRole::kPreset;
  if (s == "finetuned") return ModelRole::kFinetuned;
  throw std::invalid_argument("unknown model role: " + std::string(s));
}

json logits_request_to_json(std::span<const std::string> tokens, ModelRole role) {
  return json{{"tokens", std::vector<std::string>(tokens.begin(), tokens.end())},
              {"model", to_string(role)}};
}

std::vector<std::string> logits_request_tokens(const json& body) {
  auto tokens = string_array(require(body, "tokens"), "tokens");
  if (tokens.empty()) throw std::invalid_argument("'tokens' must be nonempty");
  return tokens;
}

ModelRole logits_request_role(const json& body) {
  return parse_model_role(get_or<std::string>(body, "model", "finetuned"));
}

json logit_table_to_json(const text::LogitTable& table) {
  return json{{"vocabulary", table.vocabulary}, {"distributions", table.distributions}};
}

text::LogitTable logit_table_from_json(const json& body) {
  text::LogitTable table;
  table.vocabulary = string_array(require(body, "vocabulary"), "vocabulary");
  const auto& rows = require(body, "distributions");
  if (!rows.is_array()) throw std::invalid_argument("'distributions' must be an array");
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != table.vocabulary.size()) {
      throw std::invalid_argument("distribution row does not match vocabulary size");
    }
    std::vector<double> values;
    values.reserve(row.size());
    for (const auto& v : row) {
      if (!v.is_number()) throw std::invalid_argument("distribution entries must be numbers");
      values.push_back(v.get<double>());
    }
    table.distributions.push_back(std::move(values));
  }
  return table;
}

json embed_request_to_json(std::span<const std::string> texts) {
  return json{{"texts", std::vector<std::string>(texts.begin(), texts.end())}};
}

std::vector<std::string> embed_request_texts(const json& body) {
  return string_array(require(body, "texts"), "texts");
}

json embed_response_to_json(const std::vector<std::vector<float>>& vectors) {
  const std::size_t dim = vectors.empty() ? 0 : vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != dim) throw std::invalid_argument("embedding batch has inconsistent dimensions");
  }
  return json{{"vectors", vectors}, {"dim", dim}};
}

std::vector<std::vector<float>> embed_response_from_json(const json& body) {
  const auto dim = require(body, "dim").get<std::size_t>();
  const auto& rows = require(body, "vectors");
  if (!rows.is_array()) throw std::invalid_argument("'vectors' must be an array");
  std::vector<std::vector<float>> out;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != dim) {
      throw std::invalid_argument("embedding batch has inconsistent dimensions");
    }
    std::vector<float> v;
    v.reserve(dim);
    for (const auto& x : row) {
      if (!x.is_number()) throw std::invalid_argument("embedding entries must be numbers");
      const auto f = x.get<float>();
      if (!std::isfinite(f)) throw std::invalid_argument("embedding entry is not finite");
      v.push_back(f);
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace taletailor::gen::protocol
