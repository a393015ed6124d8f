#include "taletailor/service/story.hpp"

#include <algorithm>

#include "taletailor/text/tokenize.hpp"

namespace taletailor::service {

using nlohmann::json;

ServiceError::ServiceError(int status, std::string code, const std::string& message,
                           std::optional<std::string> field)
    : std::runtime_error(message), status_(status), code_(std::move(code)), field_(std::move(field)) {}

json ServiceError::to_json() const {
  json j{{"code", code_}, {"message", what()}};
  if (field_) j["field"] = *field_;
  if (!fields.empty()) j["fields"] = fields;
  return j;
}

ServiceError not_found(const std::string& what) {
  return ServiceError(404, "not_found", what + " not found");
}

ServiceError bad_request(const std::string& message, std::optional<std::string> field) {
  return ServiceError(400, "bad_request", message, std::move(field));
}

std::string_view to_string(Provenance p) { return p == Provenance::kHuman ? "human" : "machine"; }
std::string_view to_string(BlockKind k) { return k == BlockKind::kText ? "text" : "image"; }
std::string_view to_string(StoryStatus s) {
  return s == StoryStatus::kDraft ? "draft" : "published";
}

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(const json& j, const char* key, const std::array<std::pair<std::string_view, Enum>, N>& names) {
  const auto s = j.at(key).get<std::string>();
  for (const auto& [name, value] : names) {
    if (s == name) return value;
  }
  throw std::invalid_argument(std::string("bad ") + key + ": " + s);
}

constexpr std::array<std::pair<std::string_view, Provenance>, 2> kProvenanceNames{
    {{"human", Provenance::kHuman}, {"machine", Provenance::kMachine}}};
constexpr std::array<std::pair<std::string_view, BlockKind>, 2> kKindNames{
    {{"text", BlockKind::kText}, {"image", BlockKind::kImage}}};
constexpr std::array<std::pair<std::string_view, StoryStatus>, 2> kStatusNames{
    {{"draft", StoryStatus::kDraft}, {"published", StoryStatus::kPublished}}};

json block_to_json(const Block& b) {
  json j{{"id", b.id}, {"kind", to_string(b.kind)}, {"provenance", to_string(b.provenance)}};
  if (b.kind == BlockKind::kText) {
    j["content"] = b.content;
    j["edited"] = b.edited;
  } else {
    j["image_id"] = b.image_id;
    j["query"] = b.query;
    j["theme"] = b.theme;
    j["attribution"] = b.attribution;
  }
  return j;
}

Block block_from_json(const json& j) {
  Block b;
  b.id = j.at("id").get<std::string>();
  b.kind = parse_enum(j, "kind", kKindNames);
  b.provenance = parse_enum(j, "provenance", kProvenanceNames);
  if (b.kind == BlockKind::kText) {
    b.content = j.at("content").get<std::string>();
    b.edited = j.at("edited").get<bool>();
  } else {
    b.image_id = j.at("image_id").get<std::string>();
    b.query = j.value("query", "");
    b.theme = j.value("theme", "");
    b.attribution = j.value("attribution", "");
  }
  return b;
}

bool nonblank(const json& j, std::string_view key) {
  const auto it = j.find(key);
  return it != j.end() && it->is_string() && !text::trim(it->get<std::string>()).empty();
}

}  // namespace

FeedbackRecord parse_feedback(const json& j, std::string story_id) {
  FeedbackRecord f;
  f.story_id = std::move(story_id);
  std::vector<std::string> bad;
  if (!j.is_object()) {
    ServiceError e(422, "validation_failed", "feedback must be an object", "feedback");
    e.fields = {"feedback"};
    throw e;
  }

  const auto likert = j.find("likert");
  for (std::size_t i = 0; i < kLikertItems; ++i) {
    const std::string key(kLikertKeys[i]);
    bool ok = false;
    if (likert != j.end() && likert->is_object()) {
      const auto v = likert->find(key);
      if (v != likert->end() && v->is_number_integer()) {
        const auto x = v->get<std::int64_t>();
        if (x >= 1 && x <= 5) {
          f.likert[i] = static_cast<int>(x);
          ok = true;
        }
      }
    }
    if (!ok) bad.push_back("likert." + key);
  }

  auto one_of = [&](const char* key, auto& allowed, std::string& out) {
    const auto it = j.find(key);
    if (it != j.end() && it->is_string()) {
      const auto s = it->template get<std::string>();
      if (std::find(allowed.begin(), allowed.end(), s) != allowed.end()) {
        out = s;
        return;
      }
    }
    bad.emplace_back(key);
  };
  one_of("decline_rate", kDeclineRates, f.decline_rate);
  one_of("mode_usage", kModeUsages, f.mode_usage);

  for (std::size_t i = 0; i < kFeedbackTextKeys.size(); ++i) {
    if (nonblank(j, kFeedbackTextKeys[i])) {
      f.answers[i] = j.at(std::string(kFeedbackTextKeys[i])).get<std::string>();
    } else {
      bad.emplace_back(kFeedbackTextKeys[i]);
    }
  }
  if (const auto c = j.find("comments"); c != j.end()) {
    if (c->is_string()) {
      f.comments = c->get<std::string>();
    } else if (!c->is_null()) {
      bad.emplace_back("comments");
    }
  }

  if (!bad.empty()) {
    std::string msg = "feedback is incomplete:";
    for (const auto& b : bad) msg += " " + b;
    ServiceError e(422, "validation_failed", msg, bad.front());
    e.fields = std::move(bad);
    throw e;
  }
  return f;
}

json to_json(const FeedbackRecord& f) {
  json likert = json::object();
  for (std::size_t i = 0; i < kLikertItems; ++i) likert[std::string(kLikertKeys[i])] = f.likert[i];
  json j{{"story_id", f.story_id},
         {"likert", likert},
         {"decline_rate", f.decline_rate},
         {"mode_usage", f.mode_usage},
         {"comments", f.comments}};
  for (std::size_t i = 0; i < kFeedbackTextKeys.size(); ++i) {
    j[std::string(kFeedbackTextKeys[i])] = f.answers[i];
  }
  return j;
}

std::string StoryDocument::allocate_block_id() { return "b" + std::to_string(next_block++); }

std::optional<std::size_t> StoryDocument::block_index(std::string_view block_id) const {
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].id == block_id) return i;
  }
  return std::nullopt;
}

json to_json(const StoryDocument& doc, bool include_snapshot) {
  json blocks = json::array();
  for (const auto& b : doc.blocks) blocks.push_back(block_to_json(b));
  json j{{"id", doc.id},
         {"title", doc.title},
         {"blocks", blocks},
         {"created_ms", doc.created_ms},
         {"updated_ms", doc.updated_ms},
         {"status", to_string(doc.status)},
         {"version", doc.version},
         {"next_block", doc.next_block},
         {"declines", doc.declines}};
  if (doc.feedback) j["feedback"] = to_json(*doc.feedback);
  if (doc.share_token) j["share_url"] = "/share/" + *doc.share_token;
  if (doc.share_token) j["share_token"] = *doc.share_token;
  if (include_snapshot && doc.html_snapshot) j["html_snapshot"] = *doc.html_snapshot;
  return j;
}

StoryDocument story_from_json(const json& j) {
  StoryDocument d;
  d.id = j.at("id").get<std::string>();
  d.title = j.at("title").get<std::string>();
  for (const auto& b : j.at("blocks")) d.blocks.push_back(block_from_json(b));
  d.created_ms = j.at("created_ms").get<std::int64_t>();
  d.updated_ms = j.at("updated_ms").get<std::int64_t>();
  d.status = parse_enum(j, "status", kStatusNames);
  d.version = j.at("version").get<std::uint64_t>();
  d.next_block = j.at("next_block").get<std::uint64_t>();
  d.declines = j.value("declines", std::uint64_t{0});
  if (j.contains("feedback")) {
    const auto& fj = j.at("feedback");
    d.feedback = parse_feedback(fj, fj.value("story_id", d.id));
  }
  if (j.contains("share_token")) d.share_token = j.at("share_token").get<std::string>();
  if (j.contains("html_snapshot")) d.html_snapshot = j.at("html_snapshot").get<std::string>();
  return d;
}

StoryAnalytics compute_analytics(const StoryDocument& doc) {
  StoryAnalytics a;
  a.declines = doc.declines;
  for (const auto& b : doc.blocks) {
    if (b.kind == BlockKind::kImage) {
      ++a.image_count;
      continue;
    }
    const std::size_t chars = text::utf8_length(b.content);
    if (b.provenance == Provenance::kMachine) {
      a.machine_chars += chars;
      ++a.machine_blocks;
      if (b.edited) ++a.edited_machine_blocks;
    } else {
      a.human_chars += chars;
      ++a.human_blocks;
    }
  }
  const std::size_t total = a.machine_chars + a.human_chars;
  if (total > 0) {
    a.machine_fraction = static_cast<double>(a.machine_chars) / static_cast<double>(total);
    a.human_fraction = static_cast<double>(a.human_chars) / static_cast<double>(total);
  }
  return a;
}

json to_json(const StoryAnalytics& a) {
  return json{{"machine_fraction", a.machine_fraction},
              {"human_fraction", a.human_fraction},
              {"machine_chars", a.machine_chars},
              {"human_chars", a.human_chars},
              {"image_count", a.image_count},
              {"blocks", {{"human", a.human_blocks}, {"machine", a.machine_blocks}}},
              {"edited_machine_blocks", a.edited_machine_blocks},
              {"declines", a.declines}};
}

std::vector<BlockEdit> parse_block_edits(const json& edits) {
  if (!edits.is_array()) throw bad_request("edits must be an array", "edits");
  std::vector<BlockEdit> out;
  for (std::size_t i = 0; i < edits.size(); ++i) {
    const auto& e = edits[i];
    const std::string where = "edits[" + std::to_string(i) + "]";
    if (!e.is_object() || !e.contains("op") || !e["op"].is_string()) {
      throw bad_request("edit needs an op", where + ".op");
    }
    BlockEdit edit;
    const auto op = e["op"].get<std::string>();
    auto need_string = [&](const char* key) {
      if (!e.contains(key) || !e[key].is_string()) {
        throw bad_request(std::string("edit needs a string ") + key, where + "." + key);
      }
      return e[key].get<std::string>();
    };
    auto need_index = [&](const char* key) {
      if (!e.contains(key) || !e[key].is_number_unsigned()) {
        throw bad_request(std::string("edit needs a non-negative integer ") + key, where + "." + key);
      }
      return e[key].get<std::size_t>();
    };
    if (op == "insert") {
      edit.op = BlockEdit::Op::kInsert;
      if (e.contains("kind") && e["kind"] != "text") {
        throw bad_request("only text blocks can be inserted directly", where + ".kind");
      }
      edit.content = need_string("content");
      if (e.contains("position")) edit.position = need_index("position");
    } else if (op == "update") {
      edit.op = BlockEdit::Op::kUpdate;
      edit.block_id = need_string("block_id");
      edit.content = need_string("content");
    } else if (op == "delete") {
      edit.op = BlockEdit::Op::kDelete;
      edit.block_id = need_string("block_id");
    } else if (op == "move") {
      edit.op = BlockEdit::Op::kMove;
      edit.block_id = need_string("block_id");
      edit.to = need_index("to");
    } else {
      throw bad_request("unknown op: " + op, where + ".op");
    }
    out.push_back(std::move(edit));
  }
  return out;
}

void apply_edits(StoryDocument& doc, const std::vector<BlockEdit>& edits) {
  auto locate = [&](const std::string& id) {
    const auto i = doc.block_index(id);
    if (!i) throw ServiceError(404, "not_found", "block " + id + " not found", "block_id");
    return *i;
  };
  auto require_text = [](const std::string& content) {
    if (text::trim(content).empty()) {
      throw ServiceError(422, "validation_failed", "text blocks must not be empty", "content");
    }
  };
  for (const auto& e : edits) {
    switch (e.op) {
      case BlockEdit::Op::kInsert: {
        require_text(e.content);
        const std::size_t pos = e.position.value_or(doc.blocks.size());
        if (pos > doc.blocks.size()) throw bad_request("insert position out of range", "position");
        Block b;
        b.id = doc.allocate_block_id();
        b.kind = BlockKind::kText;
        b.provenance = Provenance::kHuman;
        b.content = e.content;
        doc.blocks.insert(doc.blocks.begin() + static_cast<std::ptrdiff_t>(pos), std::move(b));
        break;
      }
      case BlockEdit::Op::kUpdate: {
        auto& b = doc.blocks[locate(e.block_id)];
        if (b.kind != BlockKind::kText) throw bad_request("image blocks have no text", "block_id");
        require_text(e.content);
        if (b.content != e.content) {
          b.content = e.content;
          if (b.provenance == Provenance::kMachine) b.edited = true;
        }
        break;
      }
      case BlockEdit::Op::kDelete:
        doc.blocks.erase(doc.blocks.begin() + static_cast<std::ptrdiff_t>(locate(e.block_id)));
        break;
      case BlockEdit::Op::kMove: {
        const std::size_t from = locate(e.block_id);
        if (e.to >= doc.blocks.size()) throw bad_request("move target out of range", "to");
        Block b = std::move(doc.blocks[from]);
        doc.blocks.erase(doc.blocks.begin() + static_cast<std::ptrdiff_t>(from));
        doc.blocks.insert(doc.blocks.begin() + static_cast<std::ptrdiff_t>(e.to), std::move(b));
        break;
      }
    }
  }
}

}  // namespace taletailor::service
