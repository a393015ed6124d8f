#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "taletailor/gen/provider.hpp"

/// JSON bodies of the provider wire protocol:
///
///   POST /v1/complete {context, n, mode, p, k, max_tokens, seed} -> {candidates}
///   POST /v1/logits   {tokens, model?}  -> {distributions, vocabulary}
///   POST /v1/embed    {texts}           -> {vectors, dim}
///
/// Parsers throw std::invalid_argument on malformed or dimension-inconsistent
/// bodies.
namespace taletailor::gen::protocol {

using nlohmann::json;

json completion_request_to_json(const CompletionRequest& request);
CompletionRequest completion_request_from_json(const json& body);

json completion_response_to_json(const CompletionResponse& response);
CompletionResponse completion_response_from_json(const json& body);

std::string_view to_string(ModelRole role);
ModelRole parse_model_role(std::string_view s);

json logits_request_to_json(std::span<const std::string> tokens, ModelRole role);
std::vector<std::string> logits_request_tokens(const json& body);
ModelRole logits_request_role(const json& body);

json logit_table_to_json(const text::LogitTable& table);
text::LogitTable logit_table_from_json(const json& body);

json embed_request_to_json(std::span<const std::string> texts);
std::vector<std::string> embed_request_texts(const json& body);

json embed_response_to_json(const std::vector<std::vector<float>>& vectors);
std::vector<std::vector<float>> embed_response_from_json(const json& body);

}  // namespace taletailor::gen::protocol
