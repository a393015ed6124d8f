#include "taletailor/service/story_store.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

namespace taletailor::service {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {
constexpr const char* kLogName = "stories.log.jsonl";
constexpr const char* kSnapshotName = "stories.snapshot.json";
}  // namespace

StoryStore::StoryStore() = default;

StoryStore::StoryStore(const fs::path& dir, std::size_t snapshot_every)
    : dir_(dir), snapshot_every_(std::max<std::size_t>(1, snapshot_every)) {
  fs::create_directories(dir);
  load();
  log_.open(dir / kLogName, std::ios::binary | std::ios::app);
  if (!log_) throw std::runtime_error("cannot open story log in " + dir.string());
}

void StoryStore::load() {
  const fs::path snapshot = *dir_ / kSnapshotName;
  if (fs::exists(snapshot)) {
    std::ifstream in(snapshot, std::ios::binary);
    const json j = json::parse(in);
    for (const auto& s : j.at("stories")) {
      auto doc = story_from_json(s);
      if (doc.share_token) share_tokens_[*doc.share_token] = doc.id;
      stories_[doc.id] = std::move(doc);
    }
  }
  std::ifstream log(*dir_ / kLogName, std::ios::binary);
  std::string line;
  std::size_t lineno = 0;
  std::size_t replayed = 0;
  while (std::getline(log, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto doc = story_from_json(json::parse(line).at("story"));
      if (doc.share_token) share_tokens_[*doc.share_token] = doc.id;
      stories_[doc.id] = std::move(doc);
      ++replayed;
    } catch (const std::exception& e) {
      // Only a crash mid-append can leave a bad line, and only at the end.
      if (log.peek() != std::char_traits<char>::eof()) {
        throw std::runtime_error("corrupt story log line " + std::to_string(lineno) + ": " + e.what());
      }
      spdlog::warn("ignoring torn final story log line {}", lineno);
    }
  }
  writes_since_snapshot_ = replayed;
  spdlog::info("story store: {} stories ({} log records replayed)", stories_.size(), replayed);
}

void StoryStore::persist(const StoryDocument& doc) {
  if (!dir_) return;
  log_ << json{{"op", "put"}, {"story", to_json(doc)}}.dump() << '\n';
  log_.flush();
  if (!log_) throw std::runtime_error("story log write failed");
  ++writes_since_snapshot_;
}

// Runs after the in-memory map holds the logged write, so truncating the
// log never drops it.
void StoryStore::maybe_snapshot() {
  if (dir_ && writes_since_snapshot_ >= snapshot_every_) write_snapshot();
}

void StoryStore::write_snapshot() {
  json stories = json::array();
  // Sorted for a reproducible file.
  std::vector<const StoryDocument*> docs;
  for (const auto& [id, doc] : stories_) docs.push_back(&doc);
  std::sort(docs.begin(), docs.end(), [](auto* a, auto* b) { return a->id < b->id; });
  for (const auto* d : docs) stories.push_back(to_json(*d));

  const fs::path target = *dir_ / kSnapshotName;
  const fs::path tmp = *dir_ / (std::string(kSnapshotName) + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << json{{"stories", stories}}.dump();
    out.flush();
    if (!out) throw std::runtime_error("snapshot write failed");
  }
  fs::rename(tmp, target);
  log_.close();
  log_.open(*dir_ / kLogName, std::ios::binary | std::ios::trunc);
  writes_since_snapshot_ = 0;
}

void StoryStore::insert(const StoryDocument& doc) {
  std::unique_lock lock(mutex_);
  if (stories_.contains(doc.id)) throw std::logic_error("duplicate story id " + doc.id);
  persist(doc);
  stories_[doc.id] = doc;
  maybe_snapshot();
}

std::optional<StoryDocument> StoryStore::get(const std::string& id) const {
  std::shared_lock lock(mutex_);
  const auto it = stories_.find(id);
  if (it == stories_.end()) return std::nullopt;
  return it->second;
}

std::optional<StoryDocument> StoryStore::get_by_share_token(const std::string& token) const {
  std::shared_lock lock(mutex_);
  const auto t = share_tokens_.find(token);
  if (t == share_tokens_.end()) return std::nullopt;
  return stories_.at(t->second);
}

std::size_t StoryStore::size() const {
  std::shared_lock lock(mutex_);
  return stories_.size();
}

StoryDocument StoryStore::update(const std::string& id, std::optional<std::uint64_t> expected_version,
                                 const std::function<void(StoryDocument&)>& mutate) {
  std::unique_lock lock(mutex_);
  const auto it = stories_.find(id);
  if (it == stories_.end()) throw not_found("story " + id);
  if (expected_version && *expected_version != it->second.version) {
    throw ServiceError(409, "version_conflict",
                       "story " + id + " is at version " + std::to_string(it->second.version) +
                           ", not " + std::to_string(*expected_version),
                       "version");
  }
  StoryDocument copy = it->second;
  mutate(copy);
  ++copy.version;
  persist(copy);
  if (copy.share_token) share_tokens_[*copy.share_token] = copy.id;
  it->second = copy;
  maybe_snapshot();
  return copy;
}

void StoryStore::compact() {
  std::unique_lock lock(mutex_);
  if (dir_) write_snapshot();
}

}  // namespace taletailor::service
