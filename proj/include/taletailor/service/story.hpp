#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace taletailor::service {

/// An API-level failure with a stable code. Serialized as
/// {"code", "message", "field"?, "fields"?}.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, std::string code, const std::string& message,
               std::optional<std::string> field = {});

  int status() const { return status_; }
  const std::string& code() const { return code_; }
  const std::optional<std::string>& field() const { return field_; }

  /// Offending field names for validation failures.
  std::vector<std::string> fields;
  /// Seconds, sent as Retry-After.
  std::optional<int> retry_after;

  nlohmann::json to_json() const;

 private:
  int status_;
  std::string code_;
  std::optional<std::string> field_;
};

ServiceError not_found(const std::string& what);
ServiceError bad_request(const std::string& message, std::optional<std::string> field = {});

enum class Provenance { kHuman, kMachine };
enum class BlockKind { kText, kImage };
enum class StoryStatus { kDraft, kPublished };

std::string_view to_string(Provenance p);
std::string_view to_string(BlockKind k);
std::string_view to_string(StoryStatus s);

struct Block {
  std::string id;
  BlockKind kind = BlockKind::kText;
  Provenance provenance = Provenance::kHuman;
  // Text blocks.
  std::string content;
  bool edited = false;
  // Image blocks.
  std::string image_id;
  std::string query;
  std::string theme;
  std::string attribution;

  friend bool operator==(const Block&, const Block&) = default;
};

inline constexpr std::size_t kLikertItems = 8;

/// Agreement statements of the user-test form, in form order.
inline constexpr std::array<std::string_view, kLikertItems> kLikertKeys = {
    "grammar", "order", "sense", "repetition", "interesting", "quality", "enjoyable", "theme"};

inline constexpr std::array<std::string_view, 5> kDeclineRates = {"never", "25", "50", "75",
                                                                  "always"};
inline constexpr std::array<std::string_view, 3> kModeUsages = {"fast", "hq", "both"};

/// Required free-text answers.
inline constexpr std::array<std::string_view, 5> kFeedbackTextKeys = {
    "background", "mode_explanation", "images_usage", "liked", "disliked"};

struct FeedbackRecord {
  std::string story_id;
  std::array<int, kLikertItems> likert{};
  std::string decline_rate;
  std::string mode_usage;
  std::array<std::string, kFeedbackTextKeys.size()> answers;
  std::string comments;  // optional

  friend bool operator==(const FeedbackRecord&, const FeedbackRecord&) = default;
};

/// Validates a submitted form. Throws ServiceError (422, validation_failed)
/// listing every missing or invalid field, e.g. "likert.grammar".
FeedbackRecord parse_feedback(const nlohmann::json& j, std::string story_id);
nlohmann::json to_json(const FeedbackRecord& f);

struct StoryDocument {
  std::string id;
  std::string title;
  std::vector<Block> blocks;
  std::int64_t created_ms = 0;
  std::int64_t updated_ms = 0;
  StoryStatus status = StoryStatus::kDraft;
  std::uint64_t version = 1;
  std::uint64_t next_block = 1;
  std::uint64_t declines = 0;
  std::optional<FeedbackRecord> feedback;
  std::optional<std::string> share_token;
  std::optional<std::string> html_snapshot;

  friend bool operator==(const StoryDocument&, const StoryDocument&) = default;

  /// Assigns the next block id ("b1", "b2", ...).
  std::string allocate_block_id();
  std::optional<std::size_t> block_index(std::string_view block_id) const;
};

nlohmann::json to_json(const StoryDocument& doc, bool include_snapshot = true);
StoryDocument story_from_json(const nlohmann::json& j);

struct StoryAnalytics {
  double machine_fraction = 0.0;  // by characters over text blocks
  double human_fraction = 0.0;
  std::size_t machine_chars = 0;
  std::size_t human_chars = 0;
  std::size_t image_count = 0;
  std::size_t human_blocks = 0;
  std::size_t machine_blocks = 0;
  std::size_t edited_machine_blocks = 0;
  std::uint64_t declines = 0;

  friend bool operator==(const StoryAnalytics&, const StoryAnalytics&) = default;
};

/// Recomputed from the blocks; characters are UTF-8 code points. Both
/// fractions are 0 for a story without text.
StoryAnalytics compute_analytics(const StoryDocument& doc);
nlohmann::json to_json(const StoryAnalytics& a);

/// One PATCH operation on a draft.
struct BlockEdit {
  enum class Op { kInsert, kUpdate, kDelete, kMove };
  Op op = Op::kInsert;
  std::optional<std::size_t> position;  // insert; default append
  std::string block_id;                 // update, delete, move
  std::string content;                  // insert, update
  std::size_t to = 0;                   // move target index
};

std::vector<BlockEdit> parse_block_edits(const nlohmann::json& edits);

/// Applies the edits in order. Inserted blocks are human text; updating a
/// machine block keeps its provenance and marks it edited. Throws
/// ServiceError on an unknown block, an out-of-range position, empty text or
/// an edit that targets an image block's content.
void apply_edits(StoryDocument& doc, const std::vector<BlockEdit>& edits);

}  // namespace taletailor::service
