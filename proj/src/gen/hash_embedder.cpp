#include <cmath>
#include <stdexcept>

#include "taletailor/gen/provider.hpp"
#include "taletailor/text/tokenize.hpp"

namespace taletailor::gen {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

HashEmbedder::HashEmbedder(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("embedding dimension must be positive");
}

std::vector<float> HashEmbedder::embed_one(std::string_view text) const {
  const auto& stop = text::default_stop_words();
  std::vector<std::string> words;
  std::vector<std::string> content;
  for (const auto& w : text::split_words(text)) {
    auto lower = text::to_lower(w);
    if (!stop.contains(lower)) content.push_back(lower);
    words.push_back(std::move(lower));
  }
  const auto& used = content.empty() ? words : content;

  std::vector<double> acc(dim_, 0.0);
  for (const auto& w : used) {
    const std::uint64_t h = fnv1a64(w);
    acc[h % dim_] += ((h >> 32) & 1U) != 0 ? -1.0 : 1.0;
  }
  double norm = 0.0;
  for (double v : acc) norm += v * v;
  norm = std::sqrt(norm);

  std::vector<float> out(dim_, 0.0F);
  if (norm == 0.0) {
    // No words, or every bucket cancelled out.
    out[0] = 1.0F;
    return out;
  }
  for (std::size_t i = 0; i < dim_; ++i) out[i] = static_cast<float>(acc[i] / norm);
  return out;
}

std::vector<std::vector<float>> HashEmbedder::embed(std::span<const std::string> texts) const {
  std::vector<std::vector<float>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_one(t));
  return out;
}

}  // namespace taletailor::gen
