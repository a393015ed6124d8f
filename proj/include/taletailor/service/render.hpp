#pragma once

#include <string>
#include <string_view>

#include "taletailor/service/story.hpp"

namespace taletailor::service {

std::string html_escape(std::string_view s);

/// Standalone HTML page for a story. Text blocks are
/// <p class="block text machine|human">; machine text (edited or not) gets
/// a blue background, edited machine text also the "edited" class. Image
/// blocks become figures captioned with their attribution.
std::string render_html(const StoryDocument& doc);

}  // namespace taletailor::service
