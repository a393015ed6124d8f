#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "taletailor/gen/provider.hpp"

namespace taletailor::gen {

/// Client for a provider speaking the HTTP wire protocol. Unreachable hosts
/// raise TransportError; non-200 replies and malformed bodies raise
/// GenerationError.
class RemoteProvider final : public CompletionProvider, public EmbeddingProvider {
 public:
  explicit RemoteProvider(std::string base_url,
                          std::chrono::milliseconds timeout = std::chrono::seconds(30));

  CompletionResponse complete(const CompletionRequest& request) const override;
  std::vector<std::vector<float>> embed(std::span<const std::string> texts) const override;
  text::LogitTable logits(std::span<const std::string> tokens, ModelRole role) const;

  /// Adapter exposing one model of the remote pair as a text::LogitProvider.
  std::shared_ptr<const text::LogitProvider> logit_provider(ModelRole role) const;

  const std::string& base_url() const { return base_url_; }

 private:
  std::string post(const std::string& path, const std::string& body) const;

  std::string base_url_;
  std::chrono::milliseconds timeout_;
};

}  // namespace taletailor::gen
