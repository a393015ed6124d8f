#include "taletailor/retrieval/consistency.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "taletailor/text/divergence.hpp"

namespace taletailor::retrieval {

std::vector<ClassDistribution> parse_class_distributions(std::istream& in) {
  std::vector<ClassDistribution> out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    ClassDistribution d;
    std::size_t pos = line.find('\t');
    d.image_id = line.substr(0, pos);
    while (pos != std::string::npos) {
      const std::size_t next = line.find('\t', pos + 1);
      const std::string field =
          line.substr(pos + 1, next == std::string::npos ? std::string::npos : next - pos - 1);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v) || v < 0.0) {
        throw std::runtime_error("class distribution line " + std::to_string(line_no) +
                                 ": bad probability '" + field + "'");
      }
      d.probabilities.push_back(v);
      pos = next;
    }
    if (d.probabilities.empty()) {
      throw std::runtime_error("class distribution line " + std::to_string(line_no) +
                               ": no probabilities");
    }
    if (width == 0) width = d.probabilities.size();
    if (d.probabilities.size() != width) {
      throw std::runtime_error("class distribution line " + std::to_string(line_no) +
                               ": taxonomy size differs from earlier rows");
    }
    const double sum = std::accumulate(d.probabilities.begin(), d.probabilities.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-3) {
      throw std::runtime_error("class distribution line " + std::to_string(line_no) +
                               ": probabilities sum to " + std::to_string(sum));
    }
    for (double& p : d.probabilities) p /= sum;
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<ClassDistribution> load_class_distributions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_class_distributions(in);
}

double symmetric_kl(std::span<const double> p, std::span<const double> q) {
  return text::kl_divergence(p, q) + text::kl_divergence(q, p);
}

double consistency(std::span<const ClassDistribution> images) {
  if (images.size() < 2) return 0.0;
  const std::size_t width = images.front().probabilities.size();
  for (const auto& img : images) {
    if (img.probabilities.size() != width) {
      throw std::invalid_argument("images use different class taxonomies");
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      total += symmetric_kl(images[i].probabilities, images[j].probabilities);
    }
  }
  return total;
}

std::vector<RankedStory> rank_stories_by_consistency(std::span<const StoryImages> stories) {
  std::vector<RankedStory> out;
  out.reserve(stories.size());
  for (const auto& s : stories) {
    RankedStory r{s.story_id, std::nullopt};
    if (!s.images.empty()) r.consistency = consistency(s.images);
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [](const RankedStory& a, const RankedStory& b) {
    if (a.consistency.has_value() != b.consistency.has_value()) return a.consistency.has_value();
    if (!a.consistency) return false;
    return *a.consistency < *b.consistency;
  });
  return out;
}

}  // namespace taletailor::retrieval
