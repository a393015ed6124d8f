#pragma once

#include <httplib.h>

#include "taletailor/service/story_service.hpp"

namespace taletailor::service {

/// Registers the story routes:
///   POST  /stories                      {title?, text?: [string]}
///   GET   /stories/{id}
///   PATCH /stories/{id}/blocks          {version, edits: [...]}
///   POST  /stories/{id}/autocomplete    {mode: fast|hq, cursor?, seed?}
///   POST  /stories/{id}/images/suggest  {query, k?, theme?}
///   POST  /stories/{id}/accept          {ref, position?, theme?}
///   POST  /stories/{id}/decline         {ref}
///   POST  /stories/{id}/publish         {feedback}
///   GET   /stories/{id}/analytics
///   GET   /share/{token}
/// Errors are {"code", "message", "field"?} with a matching HTTP status.
/// `service` must outlive the server.
void mount_story_routes(httplib::Server& server, StoryService& service);

}  // namespace taletailor::service
