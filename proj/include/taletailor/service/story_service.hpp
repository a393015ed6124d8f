#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <deque>
#include <vector>

#include "taletailor/corpus/extracts.hpp"
#include "taletailor/gen/provider.hpp"
#include "taletailor/gen/sampling.hpp"
#include "taletailor/rerank/reranker.hpp"
#include "taletailor/retrieval/embedding_index.hpp"
#include "taletailor/service/story.hpp"
#include "taletailor/service/story_store.hpp"
#include "taletailor/text/scoring.hpp"

namespace taletailor::service {

/// Handles shared by every request. All are read-only after startup except
/// the index, which can be swapped whole.
struct ServiceResources {
  std::shared_ptr<const gen::CompletionProvider> completion;
  std::shared_ptr<const text::ScoringContext> scoring;
  std::shared_ptr<const retrieval::EmbeddingIndex> index;
  std::shared_ptr<const gen::EmbeddingProvider> embedder;
};

struct ServiceConfig {
  gen::GeneratorConfig generator;
  rerank::RerankConfig rerank;
  std::size_t default_image_k = 3;
  /// Seconds suggested to clients when the provider is down.
  int retry_after_seconds = 5;
  /// Pending suggestions kept for accept/decline before the oldest expire.
  std::size_t max_pending_suggestions = 10000;
};

/// Order of the built-in tale model; the preset comparison model is order 1.
inline constexpr int kBuiltinOrder = 3;

/// Offline resources from a prepared corpus: an order-3 n-gram generator
/// (also the fine-tuned logit model), an order-1 preset model or one trained
/// on `preset_corpus`, frequent words from the corpus, and a hash embedder
/// sized to `index` (64 dims when there is no index).
ServiceResources make_builtin_resources(
    const std::vector<corpus::CleanExtract>& corpus, text::SentimentLexicon lexicon,
    std::shared_ptr<const retrieval::EmbeddingIndex> index,
    const std::vector<corpus::CleanExtract>* preset_corpus = nullptr);

enum class AutocompleteMode { kFast, kHq };
AutocompleteMode parse_autocomplete_mode(std::string_view s);

struct Suggestion {
  std::string ref;
  std::string text;
  // HQ only.
  std::optional<rerank::Candidate> scored;
};

struct AutocompleteResult {
  AutocompleteMode mode = AutocompleteMode::kFast;
  std::vector<Suggestion> suggestions;
  bool partial_scores = false;
};

struct ImageSuggestion {
  std::string ref;
  std::string image_id;
  double score = 0.0;
  std::string attribution;
};

struct ImageSuggestions {
  std::vector<ImageSuggestion> hits;
  std::optional<std::string> warning;
};

struct PublishResult {
  std::string share_url;
  StoryDocument story;
};

/// The story workflow. Thread-safe; requests on different stories never
/// block each other beyond the short store lock, and generation runs
/// outside any lock.
class StoryService {
 public:
  StoryService(ServiceResources resources, ServiceConfig config, std::shared_ptr<StoryStore> store);

  StoryDocument create_story(std::string title, const std::vector<std::string>& human_text = {});
  StoryDocument get_story(const std::string& id) const;
  StoryDocument update_blocks(const std::string& id, std::uint64_t expected_version,
                              const std::vector<BlockEdit>& edits);

  /// Context is the text blocks before `cursor` (default: all) joined by
  /// spaces. Suggestions are held server-side until accepted or declined.
  AutocompleteResult autocomplete(const std::string& id, AutocompleteMode mode,
                                  std::optional<std::size_t> cursor = {},
                                  std::optional<std::uint64_t> seed = {});

  ImageSuggestions suggest_images(const std::string& id, const std::string& query,
                                  std::optional<std::size_t> k = {}, std::string theme = {});

  /// Turns a pending suggestion into a machine block at `position` (default
  /// end). The only way machine blocks come into existence.
  StoryDocument accept(const std::string& id, const std::string& ref,
                       std::optional<std::size_t> position = {},
                       std::optional<std::string> theme = {});

  /// Discards a pending suggestion and counts the decline.
  StoryDocument decline(const std::string& id, const std::string& ref);

  PublishResult publish(const std::string& id, const nlohmann::json& feedback);
  StoryAnalytics analytics(const std::string& id) const;

  /// The frozen HTML of a published story.
  std::string shared_html(const std::string& token) const;

  void swap_index(std::shared_ptr<const retrieval::EmbeddingIndex> index);
  std::shared_ptr<const retrieval::EmbeddingIndex> index() const;

 private:
  struct Pending {
    std::string story_id;
    BlockKind kind = BlockKind::kText;
    std::string text;
    std::string image_id;
    std::string query;
    std::string theme;
    std::string attribution;
  };

  std::string remember(Pending p);
  std::optional<Pending> take(const std::string& story_id, const std::string& ref);
  StoryDocument mutate_draft(const std::string& id, std::optional<std::uint64_t> version,
                             const std::function<void(StoryDocument&)>& f);

  ServiceResources resources_;
  ServiceConfig config_;
  std::shared_ptr<StoryStore> store_;

  mutable std::mutex index_mutex_;

  std::mutex pending_mutex_;
  std::unordered_map<std::string, Pending> pending_;
  std::deque<std::string> pending_order_;

  std::atomic<std::uint64_t> counter_{0};
  std::uint64_t instance_salt_;
};

}  // namespace taletailor::service
