#pragma once

#include <stdexcept>
#include <string>

namespace taletailor::gen {

/// Base for anything a completion/logit/embedding provider can fail with.
class ProviderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The provider could not be reached (connection refused, timeout, ...).
class TransportError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

/// The provider was reached but could not produce a result.
class GenerationError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

}  // namespace taletailor::gen
