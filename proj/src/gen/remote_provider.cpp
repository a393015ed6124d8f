#include "taletailor/gen/remote_provider.hpp"

#include <httplib.h>

#include "taletailor/gen/errors.hpp"
#include "taletailor/gen/protocol.hpp"

namespace taletailor::gen {

namespace {

class RemoteLogitProvider final : public text::LogitProvider {
 public:
  RemoteLogitProvider(const RemoteProvider& remote, ModelRole role)
      : remote_(remote.base_url()), role_(role) {}

  std::vector<std::string> tokenize(std::string_view text) const override {
    std::vector<std::string> tokens{std::string(kEndOfSentence)};
    for (auto& tok : model_tokens(text)) {
      if (tok == kEndOfSentence && tokens.back() == kEndOfSentence) continue;
      tokens.push_back(std::move(tok));
    }
    return tokens;
  }

  text::LogitTable logits(std::span<const std::string> tokens) const override {
    return remote_.logits(tokens, role_);
  }

 private:
  RemoteProvider remote_;
  ModelRole role_;
};

template <typename F>
auto parse_or_throw(const std::string& body, F&& parse) {
  try {
    return parse(nlohmann::json::parse(body));
  } catch (const std::exception& e) {
    throw GenerationError(std::string("malformed provider reply: ") + e.what());
  }
}

}  // namespace

RemoteProvider::RemoteProvider(std::string base_url, std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), timeout_(timeout) {}

std::string RemoteProvider::post(const std::string& path, const std::string& body) const {
  httplib::Client client(base_url_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  auto res = client.Post(path, body, "application/json");
  if (!res) {
    throw TransportError("provider " + base_url_ + path + " unreachable: " +
                         httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw GenerationError("provider " + path + " returned HTTP " + std::to_string(res->status) +
                          ": " + res->body);
  }
  return res->body;
}

CompletionResponse RemoteProvider::complete(const CompletionRequest& request) const {
  const auto body = post("/v1/complete", protocol::completion_request_to_json(request).dump());
  auto response = parse_or_throw(body, protocol::completion_response_from_json);
  if (response.candidates.size() != static_cast<std::size_t>(request.n_candidates)) {
    throw GenerationError("provider returned " + std::to_string(response.candidates.size()) +
                          " candidates, expected " + std::to_string(request.n_candidates));
  }
  return response;
}

std::vector<std::vector<float>> RemoteProvider::embed(std::span<const std::string> texts) const {
  const auto body = post("/v1/embed", protocol::embed_request_to_json(texts).dump());
  auto vectors = parse_or_throw(body, protocol::embed_response_from_json);
  if (vectors.size() != texts.size()) throw GenerationError("provider embedded a different batch size");
  return vectors;
}

text::LogitTable RemoteProvider::logits(std::span<const std::string> tokens, ModelRole role) const {
  const auto body = post("/v1/logits", protocol::logits_request_to_json(tokens, role).dump());
  auto table = parse_or_throw(body, protocol::logit_table_from_json);
  if (table.distributions.size() != tokens.size()) {
    throw GenerationError("provider returned a distribution count different from the token count");
  }
  return table;
}

std::shared_ptr<const text::LogitProvider> RemoteProvider::logit_provider(ModelRole role) const {
  return std::make_shared<RemoteLogitProvider>(*this, role);
}

}  // namespace taletailor::gen
