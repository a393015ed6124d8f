#include "taletailor/service/http_api.hpp"

#include <spdlog/spdlog.h>

namespace taletailor::service {
namespace {

using nlohmann::json;

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const ServiceError& e) {
  if (e.retry_after) res.set_header("Retry-After", std::to_string(*e.retry_after));
  send_json(res, e.status(), e.to_json());
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    auto j = json::parse(req.body);
    if (!j.is_object()) throw bad_request("request body must be a JSON object");
    return j;
  } catch (const json::exception&) {
    throw bad_request("request body is not valid JSON");
  }
}

template <typename T>
std::optional<T> optional_field(const json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end() || it->is_null()) return std::nullopt;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw bad_request(std::string("field has the wrong type: ") + key, key);
  }
}

template <typename T>
T required_field(const json& body, const char* key) {
  auto v = optional_field<T>(body, key);
  if (!v) throw bad_request(std::string("missing field: ") + key, key);
  return std::move(*v);
}

std::optional<std::size_t> optional_index(const json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_unsigned()) throw bad_request(std::string(key) + " must be a non-negative integer", key);
  return it->get<std::size_t>();
}

// Runs `handler`, turning exceptions into structured error replies.
template <typename Handler>
httplib::Server::Handler endpoint(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const ServiceError& e) {
      send_error(res, e);
    } catch (const std::invalid_argument& e) {
      send_error(res, bad_request(e.what()));
    } catch (const std::exception& e) {
      spdlog::error("{} {}: {}", req.method, req.path, e.what());
      send_error(res, ServiceError(500, "internal", e.what()));
    }
  };
}

json features_json(const rerank::Candidate& c) {
  json raw = json::object();
  json scaled = json::object();
  for (std::size_t f = 0; f < text::kFeatureCount; ++f) {
    const std::string name(text::kFeatureNames[f]);
    raw[name] = c.raw_metrics.values[f];
    scaled[name] = c.scaled[f];
  }
  return json{{"total", c.normalized_score}, {"raw", raw}, {"scaled", scaled}};
}

json autocomplete_json(const AutocompleteResult& r) {
  json suggestions = json::array();
  for (const auto& s : r.suggestions) {
    json j{{"ref", s.ref}, {"text", s.text}};
    if (s.scored) j["scores"] = features_json(*s.scored);
    suggestions.push_back(std::move(j));
  }
  json out{{"mode", r.mode == AutocompleteMode::kFast ? "fast" : "hq"}, {"suggestions", suggestions}};
  if (r.mode == AutocompleteMode::kHq) out["partial_scores"] = r.partial_scores;
  return out;
}

json images_json(const ImageSuggestions& s) {
  json hits = json::array();
  for (const auto& h : s.hits) {
    hits.push_back({{"ref", h.ref}, {"image_id", h.image_id}, {"score", h.score},
                    {"attribution", h.attribution}});
  }
  json out{{"hits", hits}};
  if (s.warning) out["warning"] = *s.warning;
  return out;
}

json story_json(const StoryDocument& doc) { return to_json(doc, /*include_snapshot=*/false); }

constexpr const char* kStory = R"(/stories/([A-Za-z0-9_-]+))";

}  // namespace

void mount_story_routes(httplib::Server& server, StoryService& service) {
  server.Post("/stories", endpoint([&service](const httplib::Request& req, httplib::Response& res) {
                const json body = parse_body(req);
                auto text = optional_field<std::vector<std::string>>(body, "text")
                                .value_or(std::vector<std::string>{});
                auto doc = service.create_story(optional_field<std::string>(body, "title").value_or(""), text);
                send_json(res, 201, story_json(doc));
              }));

  server.Get(kStory, endpoint([&service](const httplib::Request& req, httplib::Response& res) {
               send_json(res, 200, story_json(service.get_story(req.matches[1])));
             }));

  server.Patch(std::string(kStory) + "/blocks",
               endpoint([&service](const httplib::Request& req, httplib::Response& res) {
                 const json body = parse_body(req);
                 const auto version = required_field<std::uint64_t>(body, "version");
                 if (!body.contains("edits")) throw bad_request("missing field: edits", "edits");
                 const auto edits = parse_block_edits(body["edits"]);
                 send_json(res, 200, story_json(service.update_blocks(req.matches[1], version, edits)));
               }));

  server.Post(std::string(kStory) + "/autocomplete",
              endpoint([&service](const httplib::Request& req, httplib::Response& res) {
                const json body = parse_body(req);
                const auto mode = parse_autocomplete_mode(optional_field<std::string>(body, "mode").value_or("fast"));
                const auto r = service.autocomplete(req.matches[1], mode, optional_index(body, "cursor"),
                                                    optional_field<std::uint64_t>(body, "seed"));
                send_json(res, 200, autocomplete_json(r));
              }));

  server.Post(std::string(kStory) + "/images/suggest",
              endpoint([&service](const httplib::Request& req, httplib::Response& res) {
                const json body = parse_body(req);
                const auto r = service.suggest_images(
                    req.matches[1], required_field<std::string>(body, "query"), optional_index(body, "k"),
                    optional_field<std::string>(body, "theme").value_or(""));
                send_json(res, 200, images_json(r));
              }));

  server.Post(std::string(kStory) + "/accept",
              endpoint([&service](const httplib::Request& req, httplib::Response& res) {
                const json body = parse_body(req);
                auto doc = service.accept(req.matches[1], required_field<std::string>(body, "ref"),
                                          optional_index(body, "position"),
                                          optional_field<std::string>(body, "theme"));
                send_json(res, 200, story_json(doc));
              }));

  server.Post(std::string(kStory) + "/decline",
              endpoint([&service](const httplib::Request& req, httplib::Response& res) {
                const json body = parse_body(req);
                auto doc = service.decline(req.matches[1], required_field<std::string>(body, "ref"));
                send_json(res, 200, story_json(doc));
              }));

  server.Post(std::string(kStory) + "/publish",
              endpoint([&service](const httplib::Request& req, httplib::Response& res) {
                const json body = parse_body(req);
                const json feedback = body.contains("feedback") ? body["feedback"] : json();
                auto r = service.publish(req.matches[1], feedback);
                send_json(res, 200, {{"share_url", r.share_url}, {"story", story_json(r.story)}});
              }));

  server.Get(std::string(kStory) + "/analytics",
             endpoint([&service](const httplib::Request& req, httplib::Response& res) {
               send_json(res, 200, to_json(service.analytics(req.matches[1])));
             }));

  server.Get(R"(/share/([A-Za-z0-9]+))",
             endpoint([&service](const httplib::Request& req, httplib::Response& res) {
               res.set_content(service.shared_html(req.matches[1]), "text/html; charset=utf-8");
             }));
}

}  // namespace taletailor::service
