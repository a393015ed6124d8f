#pragma once

#include <memory>

#include <httplib.h>

#include "taletailor/gen/provider.hpp"

namespace taletailor::gen {

/// Backends served under /v1/*. Absent handles make the matching endpoint
/// answer 501.
struct ProviderBackends {
  std::shared_ptr<const CompletionProvider> completion;
  std::shared_ptr<const text::LogitProvider> preset;
  std::shared_ptr<const text::LogitProvider> finetuned;
  std::shared_ptr<const EmbeddingProvider> embedding;
};

void mount_provider_routes(httplib::Server& server, ProviderBackends backends);

}  // namespace taletailor::gen
