#include "taletailor/service/render.hpp"

namespace taletailor::service {

std::string html_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string render_html(const StoryDocument& doc) {
  std::string out =
      "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>" +
      html_escape(doc.title) +
      "</title>\n<style>\n"
      "body{font-family:Georgia,serif;max-width:40em;margin:2em auto;line-height:1.5}\n"
      ".block.text.machine{background:#dbeafe}\n"
      ".block.image img{max-width:100%}\n"
      ".block.image figcaption{font-size:small;color:#555}\n"
      "</style>\n</head>\n<body>\n<article class=\"story\" data-story-id=\"" +
      html_escape(doc.id) + "\">\n<h1>" + html_escape(doc.title) + "</h1>\n";
  for (const auto& b : doc.blocks) {
    if (b.kind == BlockKind::kText) {
      out += "<p class=\"block text ";
      out += to_string(b.provenance);
      if (b.edited) out += " edited";
      out += "\" data-block-id=\"" + html_escape(b.id) + "\">" + html_escape(b.content) + "</p>\n";
    } else {
      out += "<figure class=\"block image machine\" data-block-id=\"" + html_escape(b.id) +
             "\" data-image-id=\"" + html_escape(b.image_id) + "\"";
      if (!b.theme.empty()) out += " data-theme=\"" + html_escape(b.theme) + "\"";
      out += "><img src=\"/images/" + html_escape(b.image_id) + "\" alt=\"" + html_escape(b.query) +
             "\">";
      if (!b.attribution.empty()) out += "<figcaption>" + html_escape(b.attribution) + "</figcaption>";
      out += "</figure>\n";
    }
  }
  out += "</article>\n</body>\n</html>\n";
  return out;
}

}  // namespace taletailor::service
