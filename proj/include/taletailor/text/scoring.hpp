#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "taletailor/text/lexicon.hpp"
#include "taletailor/text/metrics.hpp"
#include "taletailor/text/tokenize.hpp"

namespace taletailor::text {

enum class Feature : std::size_t {
  kReadability = 0,
  kPositivity,
  kDiversity,
  kSimplicity,
  kCoherency,
  kTaleLike,
};

inline constexpr std::size_t kFeatureCount = 6;
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "readability", "positivity", "diversity", "simplicity", "coherency", "tale_like"};

/// The six raw text scores. `partial` is set when tale_like could not be
/// computed (no logit provider pair) and was left at 0.
struct MetricVector {
  std::array<double, kFeatureCount> values{};
  bool partial = false;

  double& operator[](Feature f) { return values[static_cast<std::size_t>(f)]; }
  double operator[](Feature f) const { return values[static_cast<std::size_t>(f)]; }

  friend bool operator==(const MetricVector&, const MetricVector&) = default;
};

/// Next-token distributions for a token sequence, one per position, over
/// `vocabulary`.
struct LogitTable {
  std::vector<std::string> vocabulary;
  std::vector<std::vector<double>> distributions;
};

/// A language model that can report its per-position predictions.
class LogitProvider {
 public:
  virtual ~LogitProvider() = default;

  /// Model-specific tokenization of free text.
  virtual std::vector<std::string> tokenize(std::string_view text) const = 0;

  virtual LogitTable logits(std::span<const std::string> tokens) const = 0;
};

struct LogitPair {
  std::shared_ptr<const LogitProvider> preset;
  std::shared_ptr<const LogitProvider> finetuned;
};

/// Tale-like score of free text under a provider pair. Both tables are aligned
/// on the union of their vocabularies before the KL is taken.
double tale_like_text(std::string_view text, const LogitPair& pair);

/// Read-only resources shared by every scoring call.
struct ScoringContext {
  WordSet stop_words = default_stop_words();
  SentimentLexicon lexicon;
  FrequentWordSet frequent_words;
  std::optional<LogitPair> logit_pair;
};

MetricVector score_text(const TokenizedText& t, const ScoringContext& ctx);
MetricVector score_text(std::string_view text, const ScoringContext& ctx);

/// Scores a batch in parallel (OpenMP). Output order matches input.
std::vector<MetricVector> score_batch(std::span<const std::string> texts,
                                      const ScoringContext& ctx);

/// Sequential reference for score_batch.
std::vector<MetricVector> score_batch_serial(std::span<const std::string> texts,
                                             const ScoringContext& ctx);

}  // namespace taletailor::text
