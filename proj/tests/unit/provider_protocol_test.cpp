#include <gtest/gtest.h>

#include "taletailor/gen/errors.hpp"
#include "taletailor/gen/ngram.hpp"
#include "taletailor/gen/protocol.hpp"
#include "taletailor/gen/provider_server.hpp"
#include "taletailor/gen/remote_provider.hpp"
#include "test_support.hpp"

using namespace taletailor::gen;
using nlohmann::json;

namespace {

std::shared_ptr<const NGramProvider> toy_provider(int order) {
  std::vector<std::vector<std::string>> seqs;
  for (const auto& e : tt_test::toy_corpus()) seqs.push_back(model_tokens(e.body));
  return std::make_shared<const NGramProvider>(
      std::make_shared<const NGramModel>(NGramModel::train(seqs, order)));
}

class ThrowingProvider final : public CompletionProvider {
 public:
  CompletionResponse complete(const CompletionRequest&) const override {
    throw std::runtime_error("model crashed");
  }
};

// Returns vectors of two different lengths.
class RaggedEmbedder final : public EmbeddingProvider {
 public:
  std::vector<std::vector<float>> embed(std::span<const std::string> texts) const override {
    std::vector<std::vector<float>> out;
    for (std::size_t i = 0; i < texts.size(); ++i) out.push_back(std::vector<float>(i + 2, 0.5f));
    return out;
  }
};

}  // namespace

TEST(Protocol, CompletionRequestRoundTrip) {
  CompletionRequest r{"Once upon a time", {}, 4};
  r.config.mode = SamplingMode::kTopK;
  r.config.k = 7;
  r.config.p = 0.8;
  r.config.max_tokens = 12;
  r.config.seed = 0xFFFFFFFFFFFFFFFFULL;
  const auto j = protocol::completion_request_to_json(r);
  EXPECT_EQ(j.at("n"), 4);
  EXPECT_EQ(j.at("mode"), "top_k");
  const auto back = protocol::completion_request_from_json(j);
  EXPECT_EQ(back.context, r.context);
  EXPECT_EQ(back.n_candidates, 4);
  EXPECT_EQ(back.config.mode, SamplingMode::kTopK);
  EXPECT_EQ(back.config.k, 7);
  EXPECT_EQ(back.config.max_tokens, 12);
  EXPECT_EQ(back.config.seed, r.config.seed);
}

TEST(Protocol, RejectsMalformedBodies) {
  EXPECT_THROW(protocol::completion_request_from_json(json{{"context", "x"}, {"n", 0}}),
               std::invalid_argument);
  EXPECT_THROW(protocol::completion_request_from_json(json{{"context", "x"}, {"p", 2.0}}),
               std::invalid_argument);
  EXPECT_THROW(protocol::logits_request_tokens(json{{"tokens", json::array()}}), std::invalid_argument);
  EXPECT_THROW(protocol::embed_response_from_json(json{{"vectors", {{1.0, 0.0}, {1.0}}}, {"dim", 2}}),
               std::invalid_argument);
  EXPECT_THROW(protocol::logit_table_from_json(json{{"vocabulary", {"a", "b"}}, {"distributions", {{1.0}}}}),
               std::invalid_argument);
  EXPECT_THROW(protocol::embed_response_to_json({{1.0f, 0.0f}, {1.0f}}), std::invalid_argument);
}

TEST(Protocol, RemoteProviderMatchesLocalModel) {
  const auto tuned = toy_provider(3);
  const auto preset = toy_provider(1);
  const auto embedder = std::make_shared<const HashEmbedder>(16);
  tt_test::LocalServer server([&](httplib::Server& s) {
    mount_provider_routes(s, {tuned, preset, tuned, embedder});
  });
  const RemoteProvider remote(server.url());

  CompletionRequest req{"The king", {}, 3};
  req.config.seed = 123;
  EXPECT_EQ(remote.complete(req).candidates, tuned->complete(req).candidates);

  const auto tokens = tuned->tokenize("The king had a daughter.");
  const auto local = tuned->logits(tokens);
  const auto wire = remote.logits(tokens, ModelRole::kFinetuned);
  EXPECT_EQ(wire.vocabulary, local.vocabulary);
  ASSERT_EQ(wire.distributions.size(), local.distributions.size());
  for (std::size_t i = 0; i < local.distributions.size(); ++i) {
    for (std::size_t v = 0; v < local.distributions[i].size(); ++v) {
      EXPECT_DOUBLE_EQ(wire.distributions[i][v], local.distributions[i][v]);
    }
  }
  const auto preset_wire = remote.logits(tokens, ModelRole::kPreset);
  EXPECT_EQ(preset_wire.distributions, preset->logits(tokens).distributions);

  const std::vector<std::string> texts = {"golden crow", "dark forest"};
  EXPECT_EQ(remote.embed(texts), embedder->embed(texts));

  // The remote pair is a drop-in logit provider pair.
  const taletailor::text::LogitPair remote_pair{remote.logit_provider(ModelRole::kPreset),
                                                remote.logit_provider(ModelRole::kFinetuned)};
  const taletailor::text::LogitPair local_pair{preset, tuned};
  EXPECT_DOUBLE_EQ(taletailor::text::tale_like_text("The king had a daughter.", remote_pair),
                   taletailor::text::tale_like_text("The king had a daughter.", local_pair));
}

TEST(Protocol, TransportAndGenerationErrorsAreDistinct) {
  tt_test::LocalServer server([&](httplib::Server& s) {
    mount_provider_routes(s, {std::make_shared<ThrowingProvider>(), nullptr, nullptr,
                              std::make_shared<RaggedEmbedder>()});
  });
  const RemoteProvider remote(server.url());
  CompletionRequest req{"x", {}, 1};
  EXPECT_THROW(remote.complete(req), GenerationError);
  const std::vector<std::string> texts = {"a", "b"};
  // The server refuses to send a dimension-inconsistent batch.
  EXPECT_THROW(remote.embed(texts), GenerationError);
  // Unmounted logits endpoint.
  EXPECT_THROW(remote.logits(std::vector<std::string>{"a"}, ModelRole::kFinetuned), GenerationError);

  // Nothing listens on a port we just released.
  int dead_port = 0;
  {
    httplib::Server probe;
    dead_port = probe.bind_to_any_port("127.0.0.1");
  }
  const RemoteProvider unreachable("http://127.0.0.1:" + std::to_string(dead_port),
                                   std::chrono::milliseconds(500));
  try {
    unreachable.complete(req);
    FAIL() << "expected a transport error";
  } catch (const TransportError&) {
  } catch (const GenerationError&) {
    FAIL() << "transport failure reported as generation failure";
  }
}

TEST(Protocol, ServerAnswersBadJsonWith400) {
  tt_test::LocalServer server([&](httplib::Server& s) { mount_provider_routes(s, {toy_provider(2), {}, {}, {}}); });
  httplib::Client c(server.url());
  auto r = c.Post("/v1/complete", "{not json", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 400);
  EXPECT_EQ(json::parse(r->body)["error"]["code"], "bad_json");
  r = c.Post("/v1/complete", R"({"context":"a","n":-1})", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 400);
  r = c.Post("/v1/embed", R"({"texts":["a"]})", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 501);
}
