#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <random>

#include <gtest/gtest.h>

#include "taletailor/text/divergence.hpp"
#include "taletailor/text/metrics.hpp"
#include "taletailor/text/scoring.hpp"
#include "test_support.hpp"

using namespace taletailor::text;

namespace {

std::vector<TokenDistribution> dists(const std::vector<std::vector<double>>& rows) {
  std::vector<TokenDistribution> out;
  for (const auto& r : rows) out.push_back(TokenDistribution::from_probabilities(r));
  return out;
}

// Cosines of the raw tf-idf rows. With the projection rank equal to the
// number of sentences (or terms), the SVD factorization preserves the Gram
// matrix, so LSA cosines must match these.
double tfidf_cosine_oracle(const std::vector<std::vector<std::string>>& sentences) {
  const double n = static_cast<double>(sentences.size());
  std::map<std::string, int> df;
  for (const auto& s : sentences) {
    std::set<std::string> seen(s.begin(), s.end());
    for (const auto& t : seen) ++df[t];
  }
  std::vector<std::map<std::string, double>> rows;
  for (const auto& s : sentences) {
    std::map<std::string, double> row;
    for (const auto& t : s) row[t] += 1.0;
    for (auto& [t, v] : row) v *= 1.0 + std::log(n / df[t]);
    rows.push_back(row);
  }
  auto dot = [](const auto& a, const auto& b) {
    double d = 0;
    for (const auto& [t, v] : a) {
      const auto it = b.find(t);
      if (it != b.end()) d += v * it->second;
    }
    return d;
  };
  double sum = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double denom = std::sqrt(dot(rows[0], rows[0]) * dot(rows[i], rows[i]));
    if (denom > 0) sum += dot(rows[0], rows[i]) / denom;
  }
  return sum;
}

}  // namespace

TEST(KlDivergence, HandComputedExample) {
  const double expected = 0.9 * std::log(1.8) + 0.1 * std::log(0.2);
  EXPECT_NEAR(tale_like(dists({{0.5, 0.5}}), dists({{0.9, 0.1}})), expected, 1e-12);
  EXPECT_NEAR(expected, 0.3681, 1e-4);
}

TEST(KlDivergence, IdenticalListsGiveZero) {
  const auto d = dists({{0.2, 0.3, 0.5}, {0.6, 0.4, 0.0}});
  EXPECT_EQ(tale_like(d, d), 0.0);
}

TEST(KlDivergence, MeanOverPositions) {
  const auto preset = dists({{0.5, 0.5}, {0.25, 0.75}});
  const auto tuned = dists({{0.9, 0.1}, {0.5, 0.5}});
  const double a = kl_divergence(tuned[0].probabilities(), preset[0].probabilities());
  const double b = kl_divergence(tuned[1].probabilities(), preset[1].probabilities());
  EXPECT_NEAR(tale_like(preset, tuned), (a + b) / 2.0, 1e-15);
}

TEST(KlDivergence, ZeroReferenceMassIsFloored) {
  const std::vector<double> q = {0.5, 0.5};
  const std::vector<double> p = {1.0, 0.0};
  const double expected = 0.5 * std::log(0.5) + 0.5 * (std::log(0.5) - std::log(kProbabilityFloor));
  EXPECT_NEAR(kl_divergence(q, p), expected, 1e-9);
  EXPECT_TRUE(std::isfinite(kl_divergence(q, p)));
}

TEST(KlDivergence, ErrorsOnMismatch) {
  EXPECT_THROW(tale_like(dists({{1.0}}), dists({{0.5, 0.5}})), std::invalid_argument);
  EXPECT_THROW(tale_like(dists({{1.0}}), dists({{1.0}, {1.0}})), std::invalid_argument);
  EXPECT_THROW(tale_like({}, {}), std::invalid_argument);
}

TEST(KlDivergence, NonNegativeAndZeroOnlyForEqualInputs) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng() % 10;
    const auto p = tt_test::random_distribution(rng, n);
    const auto q = tt_test::random_distribution(rng, n);
    EXPECT_GT(kl_divergence(q, p), 0.0);
    EXPECT_NEAR(kl_divergence(q, q), 0.0, 1e-12);
  }
}

TEST(TokenDistribution, ValidatesProbabilities) {
  EXPECT_THROW(TokenDistribution::from_probabilities({0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(TokenDistribution::from_probabilities({-0.1, 1.1}), std::invalid_argument);
  EXPECT_THROW(TokenDistribution::from_probabilities({NAN, 1.0}), std::invalid_argument);
  const auto d = TokenDistribution::from_logits(std::vector<double>{0.0, std::log(3.0)});
  EXPECT_NEAR(d[0], 0.25, 1e-12);
  EXPECT_NEAR(d[1], 0.75, 1e-12);
}

TEST(Coherency, SingleSentenceIsZero) {
  EXPECT_EQ(coherency(tokenize("The king rode out.")), 0.0);
  EXPECT_EQ(coherency(tokenize("")), 0.0);
}

TEST(Coherency, IdenticalSentencesScoreCountMinusOne) {
  for (int k = 2; k <= 10; ++k) {
    std::string s;
    for (int i = 0; i < k; ++i) s += "The brave king rode a white horse. ";
    EXPECT_NEAR(coherency(tokenize(s)), k - 1, 1e-6) << k;
  }
}

TEST(Coherency, DisjointVocabulariesScoreZero) {
  EXPECT_NEAR(coherency(tokenize("The king rode a horse. Dragons breathe fire.")), 0.0, 1e-6);
}

TEST(Coherency, MatchesTfIdfCosineOracleAtFullRank) {
  std::mt19937_64 rng(23);
  const std::vector<std::string> vocab = {"king", "queen", "dragon", "gold", "hen", "fox", "crow",
                                          "forest", "castle", "river", "witch", "bread"};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n_sent = 2 + rng() % 6;
    std::string text;
    for (std::size_t s = 0; s < n_sent; ++s) {
      const std::size_t len = 1 + rng() % 5;
      for (std::size_t w = 0; w < len; ++w) text += vocab[rng() % vocab.size()] + " ";
      text += ". ";
    }
    const auto t = tokenize(text);
    EXPECT_NEAR(coherency(t), tfidf_cosine_oracle(t.sentence_terms), 1e-9) << text;
  }
}

TEST(Coherency, BoundedBySentenceCount) {
  std::mt19937_64 rng(29);
  const std::vector<std::string> vocab = {"king", "gold", "hen", "fox", "crow", "forest"};
  for (int trial = 0; trial < 100; ++trial) {
    std::string text;
    const std::size_t n_sent = 1 + rng() % 8;
    for (std::size_t s = 0; s < n_sent; ++s) text += vocab[rng() % 6] + " " + vocab[rng() % 6] + ". ";
    const double c = coherency(tokenize(text));
    EXPECT_LE(c, static_cast<double>(n_sent - 1) + 1e-9);
    EXPECT_GE(c, -static_cast<double>(n_sent - 1) - 1e-9);
  }
}

TEST(Scoring, EmptyTextComposesEmptyRules) {
  ScoringContext ctx;
  const auto m = score_text("", ctx);
  EXPECT_EQ(m[Feature::kReadability], -15.0);
  EXPECT_EQ(m[Feature::kDiversity], 0.0);
  EXPECT_EQ(m[Feature::kSimplicity], 0.0);
  EXPECT_EQ(m[Feature::kPositivity], 0.0);
  EXPECT_EQ(m[Feature::kCoherency], 0.0);
  EXPECT_TRUE(m.partial);
}

TEST(Scoring, EqualsIndividualMetricCalls) {
  ScoringContext ctx;
  std::istringstream lex("a\t1\t0.75\t0\tbeautiful#1\tg\na\t2\t0\t0.5\tdark#1\tg\n");
  ctx.lexicon = SentimentLexicon::parse_sentiwordnet(lex);
  ctx.frequent_words = FrequentWordSet(WordSet{"king", "forest"});
  const std::string text = "The beautiful king walked into the dark forest. The forest was quiet.";
  const auto t = tokenize(text);
  const auto m = score_text(text, ctx);
  EXPECT_EQ(m[Feature::kReadability], readability(t));
  EXPECT_EQ(m[Feature::kPositivity], positivity(t, ctx.lexicon));
  EXPECT_EQ(m[Feature::kDiversity], diversity(t));
  EXPECT_EQ(m[Feature::kSimplicity], simplicity(t, ctx.frequent_words));
  EXPECT_EQ(m[Feature::kCoherency], coherency(t));
  EXPECT_EQ(m[Feature::kTaleLike], 0.0);
  // Hand values: words The(3) beautiful(9) king(4) walked(6) into(4) the(3)
  // dark(4) forest(6) The(3) forest(6) was(3) quiet(5) = 56 chars / 12 words,
  // 6 words per sentence.
  EXPECT_NEAR(m[Feature::kReadability], 0.5 * 56.0 / 12.0 + 6.0, 1e-12);
  // Filtered: beautiful king walked dark forest forest quiet.
  EXPECT_NEAR(m[Feature::kPositivity], (0.75 - 0.5) / 7.0, 1e-12);
  EXPECT_NEAR(m[Feature::kDiversity], 6.0 / 7.0, 1e-12);
  EXPECT_EQ(m[Feature::kSimplicity], 2.0);
}

TEST(Scoring, DeterministicAndBatchMatchesSerial) {
  ScoringContext ctx;
  ctx.frequent_words = FrequentWordSet(WordSet{"king"});
  std::vector<std::string> texts;
  for (int i = 0; i < 40; ++i) {
    texts.push_back("The king " + std::to_string(i) + " rode. The king smiled at " +
                    std::string(static_cast<std::size_t>(i % 5), 'a') + " dragons.");
  }
  const auto par = score_batch(texts, ctx);
  const auto ser = score_batch_serial(texts, ctx);
  ASSERT_EQ(par.size(), ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) EXPECT_EQ(par[i], ser[i]);
  EXPECT_EQ(score_text(texts[3], ctx), score_text(texts[3], ctx));
}
