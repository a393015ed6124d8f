#include "taletailor/gen/provider_server.hpp"

#include "taletailor/gen/errors.hpp"
#include "taletailor/gen/protocol.hpp"

namespace taletailor::gen {

namespace {

using nlohmann::json;

void reply_error(httplib::Response& res, int status, std::string_view code, std::string_view message) {
  res.status = status;
  res.set_content(json{{"error", {{"code", code}, {"message", message}}}}.dump(),
                  "application/json");
}

// Parses the body, runs `handler`, and maps exceptions to status codes.
template <typename Handler>
httplib::Server::Handler json_endpoint(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception&) {
      reply_error(res, 400, "bad_json", "request body is not valid JSON");
      return;
    }
    try {
      res.set_content(handler(body).dump(), "application/json");
    } catch (const std::invalid_argument& e) {
      reply_error(res, 400, "bad_request", e.what());
    } catch (const TransportError& e) {
      reply_error(res, 502, "upstream_unreachable", e.what());
    } catch (const std::exception& e) {
      reply_error(res, 500, "generation_failed", e.what());
    }
  };
}

void not_available(httplib::Server& server, const std::string& path) {
  server.Post(path, [](const httplib::Request&, httplib::Response& res) {
    reply_error(res, 501, "not_implemented", "this provider does not serve the endpoint");
  });
}

}  // namespace

void mount_provider_routes(httplib::Server& server, ProviderBackends backends) {
  if (backends.completion) {
    server.Post("/v1/complete", json_endpoint([c = backends.completion](const json& body) {
                  return protocol::completion_response_to_json(
                      c->complete(protocol::completion_request_from_json(body)));
                }));
  } else {
    not_available(server, "/v1/complete");
  }

  if (backends.finetuned) {
    server.Post("/v1/logits", json_endpoint([b = backends](const json& body) {
                  const auto tokens = protocol::logits_request_tokens(body);
                  const auto role = protocol::logits_request_role(body);
                  const auto& model = role == ModelRole::kPreset ? b.preset : b.finetuned;
                  if (!model) throw std::invalid_argument("model role not configured");
                  return protocol::logit_table_to_json(model->logits(tokens));
                }));
  } else {
    not_available(server, "/v1/logits");
  }

  if (backends.embedding) {
    server.Post("/v1/embed", json_endpoint([e = backends.embedding](const json& body) {
                  const auto texts = protocol::embed_request_texts(body);
                  return protocol::embed_response_to_json(e->embed(texts));
                }));
  } else {
    not_available(server, "/v1/embed");
  }
}

}  // namespace taletailor::gen
