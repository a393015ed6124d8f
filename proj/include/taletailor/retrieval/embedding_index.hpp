#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "taletailor/gen/provider.hpp"

namespace taletailor::retrieval {

class IndexFormatError : public std::runtime_error {
 public:
  enum class Kind {
    kIo,
    kBadMagic,
    kUnsupportedVersion,
    kTruncated,
    kDimensionMismatch,
    kNonFinite,
    kZeroVector,
    kDuplicateId,
    kBadId,
  };

  IndexFormatError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Unit-norm vectors keyed by image id, stored row-major.
///
/// TTIX file layout (little-endian): "TTIX", u32 version (1), u32 dim,
/// u64 count, then per entry u16 id length, UTF-8 id bytes and dim f32
/// values. Attribution strings live in an optional "<file>.meta.tsv"
/// sidecar (id TAB attribution).
class EmbeddingIndex {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  explicit EmbeddingIndex(std::size_t dim);

  /// Vectors already unit-norm within 1e-6 are stored bit-for-bit, others
  /// are rescaled. Throws IndexFormatError on a wrong dimension, non-finite
  /// or zero vector, duplicate or over-long id.
  void add(std::string id, std::span<const float> vector, std::string attribution = {});

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  const std::string& id(std::size_t row) const { return ids_[row]; }
  std::span<const float> vector(std::size_t row) const;
  std::span<const float> data() const { return values_; }
  std::optional<std::size_t> find(std::string_view id) const;

  /// Empty string when none is known.
  const std::string& attribution(std::string_view id) const;
  void set_attribution(std::string_view id, std::string attribution);

  void write(std::ostream& out) const;
  static EmbeddingIndex read(std::istream& in, std::optional<std::size_t> expected_dim = {});

  /// Writes the TTIX file and, when any attribution is set, the sidecar.
  void save(const std::filesystem::path& path) const;
  static EmbeddingIndex load(const std::filesystem::path& path,
                             std::optional<std::size_t> expected_dim = {});

  static std::filesystem::path sidecar_path(const std::filesystem::path& index_path);

 private:
  std::size_t dim_;
  std::vector<std::string> ids_;
  std::vector<float> values_;
  std::unordered_map<std::string, std::size_t> rows_;
  std::unordered_map<std::string, std::string> attributions_;
};

struct Hit {
  std::string id;
  double score = 0.0;

  friend bool operator==(const Hit&, const Hit&) = default;
};

using RetrievalResult = std::vector<Hit>;

/// Exact top-k by cosine similarity, best first, ties by ascending id.
/// Scans rows in parallel (OpenMP). k larger than the index returns every
/// entry. Throws std::invalid_argument on a dimension mismatch, k < 1 or a
/// zero query.
RetrievalResult retrieve(const EmbeddingIndex& index, std::span<const float> query, std::size_t k);

/// Sequential full-scan reference for retrieve.
RetrievalResult retrieve_serial(const EmbeddingIndex& index, std::span<const float> query,
                                std::size_t k);

/// Embeds `text` with the provider and checks it against the index dimension.
std::vector<float> embed_query(std::string_view text, const gen::EmbeddingProvider& provider,
                               std::size_t expected_dim);

}  // namespace taletailor::retrieval
