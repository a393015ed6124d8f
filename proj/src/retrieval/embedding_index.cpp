#include "taletailor/retrieval/embedding_index.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>

namespace taletailor::retrieval {

namespace {

using Kind = IndexFormatError::Kind;

constexpr std::array<char, 4> kMagic = {'T', 'T', 'I', 'X'};

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in, const char* what) {
  std::array<unsigned char, sizeof(T)> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw IndexFormatError(Kind::kTruncated, std::string("truncated index while reading ") + what);
  }
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return static_cast<T>(v);
}

}  // namespace

EmbeddingIndex::EmbeddingIndex(std::size_t dim) : dim_(dim) {
  if (dim == 0 || dim > std::numeric_limits<std::uint32_t>::max()) {
    throw IndexFormatError(Kind::kDimensionMismatch, "index dimension must be in [1, 2^32)");
  }
}

void EmbeddingIndex::add(std::string id, std::span<const float> vector, std::string attribution) {
  if (vector.size() != dim_) {
    throw IndexFormatError(Kind::kDimensionMismatch,
                           "vector for '" + id + "' has dimension " + std::to_string(vector.size()) +
                               ", index has " + std::to_string(dim_));
  }
  if (id.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw IndexFormatError(Kind::kBadId, "image id longer than 65535 bytes");
  }
  if (rows_.contains(id)) throw IndexFormatError(Kind::kDuplicateId, "duplicate image id '" + id + "'");
  double norm = 0.0;
  for (float x : vector) {
    if (!std::isfinite(x)) {
      throw IndexFormatError(Kind::kNonFinite, "non-finite component in vector '" + id + "'");
    }
    norm += static_cast<double>(x) * static_cast<double>(x);
  }
  norm = std::sqrt(norm);
  if (norm == 0.0) throw IndexFormatError(Kind::kZeroVector, "zero vector for '" + id + "'");

  const bool unit = std::abs(norm - 1.0) <= 1e-6;
  for (float x : vector) values_.push_back(unit ? x : static_cast<float>(x / norm));
  rows_.emplace(id, ids_.size());
  if (!attribution.empty()) attributions_[id] = std::move(attribution);
  ids_.push_back(std::move(id));
}

std::span<const float> EmbeddingIndex::vector(std::size_t row) const {
  return std::span<const float>(values_).subspan(row * dim_, dim_);
}

std::optional<std::size_t> EmbeddingIndex::find(std::string_view id) const {
  auto it = rows_.find(std::string(id));
  if (it == rows_.end()) return std::nullopt;
  return it->second;
}

const std::string& EmbeddingIndex::attribution(std::string_view id) const {
  static const std::string kNone;
  auto it = attributions_.find(std::string(id));
  return it == attributions_.end() ? kNone : it->second;
}

void EmbeddingIndex::set_attribution(std::string_view id, std::string attribution) {
  attributions_[std::string(id)] = std::move(attribution);
}

void EmbeddingIndex::write(std::ostream& out) const {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kFormatVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(dim_));
  put_le<std::uint64_t>(out, ids_.size());
  for (std::size_t row = 0; row < ids_.size(); ++row) {
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(ids_[row].size()));
    out.write(ids_[row].data(), static_cast<std::streamsize>(ids_[row].size()));
    for (float x : vector(row)) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(x));
  }
  if (!out) throw IndexFormatError(Kind::kIo, "failed writing index");
}

EmbeddingIndex EmbeddingIndex::read(std::istream& in, std::optional<std::size_t> expected_dim) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size())) throw IndexFormatError(Kind::kTruncated, "truncated index header");
  if (magic != kMagic) throw IndexFormatError(Kind::kBadMagic, "not a TTIX index (bad magic)");
  const auto version = get_le<std::uint32_t>(in, "version");
  if (version != kFormatVersion) {
    throw IndexFormatError(Kind::kUnsupportedVersion,
                           "unsupported TTIX version " + std::to_string(version));
  }
  const auto dim = get_le<std::uint32_t>(in, "dim");
  if (dim == 0) throw IndexFormatError(Kind::kDimensionMismatch, "index dimension is zero");
  if (expected_dim && *expected_dim != dim) {
    throw IndexFormatError(Kind::kDimensionMismatch, "index dimension " + std::to_string(dim) +
                                                         " does not match expected " +
                                                         std::to_string(*expected_dim));
  }
  const auto count = get_le<std::uint64_t>(in, "count");

  EmbeddingIndex index(dim);
  std::vector<float> buffer(dim);
  for (std::uint64_t e = 0; e < count; ++e) {
    const auto len = get_le<std::uint16_t>(in, "id length");
    std::string id(len, '\0');
    if (len > 0 && !in.read(id.data(), len)) throw IndexFormatError(Kind::kTruncated, "truncated image id");
    for (auto& x : buffer) x = std::bit_cast<float>(get_le<std::uint32_t>(in, "vector"));
    index.add(std::move(id), buffer);
  }
  return index;
}

std::filesystem::path EmbeddingIndex::sidecar_path(const std::filesystem::path& index_path) {
  auto p = index_path;
  p += ".meta.tsv";
  return p;
}

void EmbeddingIndex::save(const std::filesystem::path& path) const {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IndexFormatError(Kind::kIo, "cannot write " + path.string());
    write(out);
  }
  if (!attributions_.empty()) {
    std::ofstream meta(sidecar_path(path), std::ios::binary);
    for (const auto& id : ids_) {
      auto it = attributions_.find(id);
      if (it != attributions_.end()) meta << id << '\t' << it->second << '\n';
    }
  }
}

EmbeddingIndex EmbeddingIndex::load(const std::filesystem::path& path,
                                    std::optional<std::size_t> expected_dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IndexFormatError(Kind::kIo, "cannot open " + path.string());
  auto index = read(in, expected_dim);
  std::ifstream meta(sidecar_path(path));
  std::string line;
  while (meta && std::getline(meta, line)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    index.set_attribution(line.substr(0, tab), line.substr(tab + 1));
  }
  return index;
}

}  // namespace taletailor::retrieval
