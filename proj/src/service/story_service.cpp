#include "taletailor/service/story_service.hpp"

#include <cstdio>
#include <random>

#include "taletailor/corpus/frequent_words.hpp"
#include "taletailor/gen/errors.hpp"
#include "taletailor/gen/ngram.hpp"
#include "taletailor/gen/rng.hpp"
#include "taletailor/service/render.hpp"

namespace taletailor::service {

namespace {

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

ServiceError provider_unavailable(const std::exception& e, int retry_after) {
  ServiceError err(503, "provider_unavailable", std::string("text provider failed: ") + e.what());
  err.retry_after = retry_after;
  return err;
}

// Stream tags for identifiers drawn from the instance salt.
constexpr std::uint64_t kStoryIdStream = 1;
constexpr std::uint64_t kRefStream = 2;
constexpr std::uint64_t kTokenStream = 3;
constexpr std::uint64_t kSeedStream = 4;

}  // namespace

ServiceResources make_builtin_resources(const std::vector<corpus::CleanExtract>& corpus,
                                        text::SentimentLexicon lexicon,
                                        std::shared_ptr<const retrieval::EmbeddingIndex> index,
                                        const std::vector<corpus::CleanExtract>* preset_corpus) {
  if (corpus.empty()) throw std::invalid_argument("built-in provider needs a nonempty corpus");
  const auto sequences = corpus::training_sequences(corpus);
  auto tale_model = std::make_shared<const gen::NGramModel>(gen::NGramModel::train(sequences, kBuiltinOrder));
  auto finetuned = std::make_shared<const gen::NGramProvider>(tale_model);

  std::shared_ptr<const gen::NGramModel> preset_model;
  if (preset_corpus != nullptr && !preset_corpus->empty()) {
    preset_model = std::make_shared<const gen::NGramModel>(
        gen::NGramModel::train(corpus::training_sequences(*preset_corpus), kBuiltinOrder));
  } else {
    preset_model = std::make_shared<const gen::NGramModel>(gen::NGramModel::train(sequences, 1));
  }

  std::vector<std::string> stories;
  stories.reserve(corpus.size());
  for (const auto& e : corpus) stories.push_back(corpus::extract_story(e));

  auto scoring = std::make_shared<text::ScoringContext>();
  scoring->lexicon = std::move(lexicon);
  scoring->frequent_words = corpus::build_frequent_words(stories);
  scoring->logit_pair =
      text::LogitPair{std::make_shared<const gen::NGramProvider>(preset_model), finetuned};

  ServiceResources r;
  r.completion = finetuned;
  r.scoring = std::move(scoring);
  r.embedder = std::make_shared<const gen::HashEmbedder>(index ? index->dim() : 64);
  r.index = std::move(index);
  return r;
}

AutocompleteMode parse_autocomplete_mode(std::string_view s) {
  if (s == "fast") return AutocompleteMode::kFast;
  if (s == "hq") return AutocompleteMode::kHq;
  throw bad_request("mode must be \"fast\" or \"hq\"", "mode");
}

StoryService::StoryService(ServiceResources resources, ServiceConfig config,
                           std::shared_ptr<StoryStore> store)
    : resources_(std::move(resources)), config_(std::move(config)), store_(std::move(store)) {
  if (!resources_.completion || !resources_.scoring || !resources_.embedder) {
    throw std::invalid_argument("StoryService needs a completion provider, scoring context and embedder");
  }
  if (!store_) throw std::invalid_argument("StoryService needs a store");
  config_.generator.validate();
  config_.rerank.validate();
  std::random_device rd;
  instance_salt_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd() ^
                   static_cast<std::uint64_t>(now_ms());
}

StoryDocument StoryService::create_story(std::string title, const std::vector<std::string>& human_text) {
  StoryDocument doc;
  doc.id = hex64(gen::derive_seed(instance_salt_, kStoryIdStream, counter_++));
  doc.title = std::move(title);
  doc.created_ms = doc.updated_ms = now_ms();
  std::vector<BlockEdit> edits;
  for (const auto& t : human_text) edits.push_back({BlockEdit::Op::kInsert, {}, {}, t, 0});
  apply_edits(doc, edits);
  store_->insert(doc);
  return doc;
}

StoryDocument StoryService::get_story(const std::string& id) const {
  auto doc = store_->get(id);
  if (!doc) throw not_found("story " + id);
  return std::move(*doc);
}

StoryDocument StoryService::mutate_draft(const std::string& id, std::optional<std::uint64_t> version,
                                         const std::function<void(StoryDocument&)>& f) {
  return store_->update(id, version, [&](StoryDocument& doc) {
    if (doc.status == StoryStatus::kPublished) {
      throw ServiceError(409, "published_immutable", "story " + id + " is published");
    }
    f(doc);
    doc.updated_ms = std::max(now_ms(), doc.updated_ms);
  });
}

StoryDocument StoryService::update_blocks(const std::string& id, std::uint64_t expected_version,
                                          const std::vector<BlockEdit>& edits) {
  return mutate_draft(id, expected_version, [&](StoryDocument& doc) { apply_edits(doc, edits); });
}

std::string StoryService::remember(Pending p) {
  const std::string ref = "s" + hex64(gen::derive_seed(instance_salt_, kRefStream, counter_++));
  std::lock_guard lock(pending_mutex_);
  pending_.emplace(ref, std::move(p));
  pending_order_.push_back(ref);
  while (pending_order_.size() > config_.max_pending_suggestions) {
    pending_.erase(pending_order_.front());
    pending_order_.pop_front();
  }
  return ref;
}

std::optional<StoryService::Pending> StoryService::take(const std::string& story_id,
                                                        const std::string& ref) {
  std::lock_guard lock(pending_mutex_);
  const auto it = pending_.find(ref);
  if (it == pending_.end() || it->second.story_id != story_id) return std::nullopt;
  Pending p = std::move(it->second);
  pending_.erase(it);
  return p;
}

AutocompleteResult StoryService::autocomplete(const std::string& id, AutocompleteMode mode,
                                              std::optional<std::size_t> cursor,
                                              std::optional<std::uint64_t> seed) {
  const StoryDocument doc = get_story(id);
  if (doc.status == StoryStatus::kPublished) {
    throw ServiceError(409, "published_immutable", "story " + id + " is published");
  }
  const std::size_t end = cursor.value_or(doc.blocks.size());
  if (end > doc.blocks.size()) throw bad_request("cursor beyond the last block", "cursor");
  std::string context;
  for (std::size_t i = 0; i < end; ++i) {
    if (doc.blocks[i].kind == BlockKind::kText) context = rerank::join_text(context, doc.blocks[i].content);
  }

  gen::GeneratorConfig g = config_.generator;
  g.seed = seed.value_or(gen::derive_seed(instance_salt_, kSeedStream, counter_++));

  AutocompleteResult result;
  result.mode = mode;
  try {
    if (mode == AutocompleteMode::kFast) {
      for (auto& t : rerank::autocomplete_fast(context, *resources_.completion, g)) {
        result.suggestions.push_back({{}, std::move(t), std::nullopt});
      }
    } else {
      result.partial_scores = !resources_.scoring->logit_pair.has_value();
      for (auto& c : rerank::autocomplete_hq(context, *resources_.completion, *resources_.scoring,
                                             config_.rerank, g)) {
        std::string t = c.text;
        result.suggestions.push_back({{}, std::move(t), std::move(c)});
      }
    }
  } catch (const gen::ProviderError& e) {
    throw provider_unavailable(e, config_.retry_after_seconds);
  }
  for (auto& s : result.suggestions) {
    Pending p;
    p.story_id = id;
    p.kind = BlockKind::kText;
    p.text = s.text;
    s.ref = remember(std::move(p));
  }
  return result;
}

ImageSuggestions StoryService::suggest_images(const std::string& id, const std::string& query,
                                              std::optional<std::size_t> k, std::string theme) {
  get_story(id);
  if (text::trim(query).empty()) {
    throw ServiceError(422, "validation_failed", "query must not be empty", "query");
  }
  const std::size_t want = k.value_or(config_.default_image_k);
  if (want == 0) throw bad_request("k must be at least 1", "k");

  ImageSuggestions out;
  const auto idx = index();
  if (!idx || idx->empty()) {
    out.warning = "empty_index";
    return out;
  }
  std::vector<float> q;
  try {
    q = retrieval::embed_query(query, *resources_.embedder, idx->dim());
  } catch (const gen::ProviderError& e) {
    throw provider_unavailable(e, config_.retry_after_seconds);
  } catch (const std::invalid_argument& e) {
    throw ServiceError(422, "validation_failed", e.what(), "query");
  }
  for (const auto& hit : retrieval::retrieve(*idx, q, want)) {
    Pending p;
    p.story_id = id;
    p.kind = BlockKind::kImage;
    p.image_id = hit.id;
    p.query = query;
    p.theme = theme;
    p.attribution = idx->attribution(hit.id);
    out.hits.push_back({{}, hit.id, hit.score, p.attribution});
    out.hits.back().ref = remember(std::move(p));
  }
  return out;
}

StoryDocument StoryService::accept(const std::string& id, const std::string& ref,
                                   std::optional<std::size_t> position,
                                   std::optional<std::string> theme) {
  std::optional<Pending> p;
  {
    std::lock_guard lock(pending_mutex_);
    const auto it = pending_.find(ref);
    if (it != pending_.end() && it->second.story_id == id) p = it->second;
  }
  if (!p) throw ServiceError(404, "not_found", "suggestion " + ref + " not found", "ref");

  Block b;
  b.kind = p->kind;
  b.provenance = Provenance::kMachine;
  if (p->kind == BlockKind::kText) {
    if (text::trim(p->text).empty()) {
      throw ServiceError(422, "validation_failed", "an empty suggestion cannot be accepted", "ref");
    }
    b.content = p->text;
  } else {
    const auto idx = index();
    if (!idx || !idx->find(p->image_id)) {
      throw ServiceError(422, "validation_failed", "image " + p->image_id + " is no longer indexed", "ref");
    }
    b.image_id = p->image_id;
    b.query = p->query;
    b.theme = theme.value_or(p->theme);
    b.attribution = p->attribution;
  }

  auto doc = mutate_draft(id, std::nullopt, [&](StoryDocument& d) {
    const std::size_t pos = position.value_or(d.blocks.size());
    if (pos > d.blocks.size()) throw bad_request("position out of range", "position");
    b.id = d.allocate_block_id();
    d.blocks.insert(d.blocks.begin() + static_cast<std::ptrdiff_t>(pos), b);
  });
  take(id, ref);
  return doc;
}

StoryDocument StoryService::decline(const std::string& id, const std::string& ref) {
  {
    std::lock_guard lock(pending_mutex_);
    const auto it = pending_.find(ref);
    if (it == pending_.end() || it->second.story_id != id) {
      throw ServiceError(404, "not_found", "suggestion " + ref + " not found", "ref");
    }
  }
  auto doc = mutate_draft(id, std::nullopt, [](StoryDocument& d) { ++d.declines; });
  take(id, ref);
  return doc;
}

PublishResult StoryService::publish(const std::string& id, const nlohmann::json& feedback) {
  const std::string token = hex64(gen::derive_seed(instance_salt_, kTokenStream, counter_++)) +
                            hex64(gen::derive_seed(instance_salt_ ^ 0x5bd1e995, kTokenStream, counter_++));
  auto doc = mutate_draft(id, std::nullopt, [&](StoryDocument& d) {
    if (d.blocks.empty()) {
      ServiceError e(422, "validation_failed", "cannot publish an empty story", "blocks");
      e.fields = {"blocks"};
      throw e;
    }
    d.feedback = parse_feedback(feedback, d.id);
    d.status = StoryStatus::kPublished;
    d.share_token = token;
    d.html_snapshot = render_html(d);
  });
  return {"/share/" + token, std::move(doc)};
}

StoryAnalytics StoryService::analytics(const std::string& id) const {
  return compute_analytics(get_story(id));
}

std::string StoryService::shared_html(const std::string& token) const {
  const auto doc = store_->get_by_share_token(token);
  if (!doc || !doc->html_snapshot) throw not_found("shared story");
  return *doc->html_snapshot;
}

void StoryService::swap_index(std::shared_ptr<const retrieval::EmbeddingIndex> index) {
  std::lock_guard lock(index_mutex_);
  resources_.index = std::move(index);
}

std::shared_ptr<const retrieval::EmbeddingIndex> StoryService::index() const {
  std::lock_guard lock(index_mutex_);
  return resources_.index;
}

}  // namespace taletailor::service
