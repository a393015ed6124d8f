#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "taletailor/service/story.hpp"

namespace taletailor::service {

/// Story persistence: an in-memory map backed, when given a directory, by a
/// JSON-lines log of full-document writes ("stories.log.jsonl") and a
/// periodic snapshot ("stories.snapshot.json", replaced atomically). On
/// open, the snapshot is loaded and the log replayed over it; a torn final
/// log line is ignored.
class StoryStore {
 public:
  /// Memory-only store.
  StoryStore();
  explicit StoryStore(const std::filesystem::path& dir, std::size_t snapshot_every = 64);

  StoryStore(const StoryStore&) = delete;
  StoryStore& operator=(const StoryStore&) = delete;

  /// Throws std::logic_error if the id exists.
  void insert(const StoryDocument& doc);

  std::optional<StoryDocument> get(const std::string& id) const;
  std::optional<StoryDocument> get_by_share_token(const std::string& token) const;
  std::size_t size() const;

  /// Read-modify-write under the store lock. When `expected_version` is set
  /// and differs from the stored one, throws ServiceError(409,
  /// version_conflict). `mutate` edits a copy; if it throws nothing changes.
  /// On success the version is bumped and the document persisted.
  StoryDocument update(const std::string& id, std::optional<std::uint64_t> expected_version,
                       const std::function<void(StoryDocument&)>& mutate);

  /// Writes a snapshot now and truncates the log.
  void compact();

 private:
  void load();
  void persist(const StoryDocument& doc);
  void maybe_snapshot();
  void write_snapshot();

  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, StoryDocument> stories_;
  std::unordered_map<std::string, std::string> share_tokens_;
  std::optional<std::filesystem::path> dir_;
  std::ofstream log_;
  std::size_t snapshot_every_ = 64;
  std::size_t writes_since_snapshot_ = 0;
};

}  // namespace taletailor::service
