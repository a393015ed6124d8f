// Command-line entry point: ranking, retrieval, corpus preparation and the
// HTTP servers.
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>
#include <spdlog/spdlog.h>

#include "taletailor/corpus/clean.hpp"
#include "taletailor/corpus/frequent_words.hpp"
#include "taletailor/corpus/ingest.hpp"
#include "taletailor/corpus/stats.hpp"
#include "taletailor/gen/ngram.hpp"
#include "taletailor/gen/provider.hpp"
#include "taletailor/gen/provider_server.hpp"
#include "taletailor/gen/remote_provider.hpp"
#include "taletailor/rerank/reranker.hpp"
#include "taletailor/retrieval/embedding_index.hpp"
#include "taletailor/service/http_api.hpp"
#include "taletailor/service/story_service.hpp"

namespace fs = std::filesystem;
using namespace taletailor;

namespace {

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!text::trim(line).empty()) lines.push_back(line);
  }
  return lines;
}

std::shared_ptr<const gen::NGramModel> train_model(const std::vector<corpus::CleanExtract>& extracts,
                                                   int order) {
  return std::make_shared<const gen::NGramModel>(
      gen::NGramModel::train(corpus::training_sequences(extracts), order));
}

// Scoring resources from a directory holding lexicon.tsv, freq_words.txt and
// optionally corpus.jsonl (enables the tale-like feature).
text::ScoringContext load_scoring_dir(const fs::path& dir) {
  text::ScoringContext ctx;
  if (fs::exists(dir / "lexicon.tsv")) {
    ctx.lexicon = text::SentimentLexicon::load_sentiwordnet(dir / "lexicon.tsv");
  } else {
    spdlog::warn("{} has no lexicon.tsv; positivity will be 0", dir.string());
  }
  if (fs::exists(dir / "freq_words.txt")) {
    ctx.frequent_words = text::FrequentWordSet::load(dir / "freq_words.txt");
  } else {
    spdlog::warn("{} has no freq_words.txt; simplicity will be 0", dir.string());
  }
  if (fs::exists(dir / "corpus.jsonl")) {
    const auto extracts = corpus::read_corpus_jsonl(dir / "corpus.jsonl");
    ctx.logit_pair = text::LogitPair{
        std::make_shared<const gen::NGramProvider>(train_model(extracts, 1)),
        std::make_shared<const gen::NGramProvider>(train_model(extracts, service::kBuiltinOrder))};
  }
  return ctx;
}

int cmd_rank(const fs::path& in, const fs::path& ctx_dir) {
  const auto texts = read_lines(in);
  if (texts.empty()) throw std::runtime_error("no candidates in " + in.string());
  const auto ctx = load_scoring_dir(ctx_dir);
  const auto ranked = rerank::rank(texts, ctx);
  std::cout << "rank\ttotal";
  for (const auto name : text::kFeatureNames) std::cout << '\t' << name;
  std::cout << "\ttext\n" << std::setprecision(10);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    std::cout << i + 1 << '\t' << ranked[i].normalized_score;
    for (const double v : ranked[i].raw_metrics.values) std::cout << '\t' << v;
    std::cout << '\t' << ranked[i].text << '\n';
  }
  if (!ctx.logit_pair) spdlog::warn("no corpus.jsonl: tale_like is 0 (partial scores)");
  return 0;
}

int cmd_retrieve(const fs::path& index_path, const std::string& query, std::size_t k,
                 const std::string& provider_url) {
  const auto index = retrieval::EmbeddingIndex::load(index_path);
  std::unique_ptr<gen::EmbeddingProvider> embedder;
  if (provider_url.empty()) {
    embedder = std::make_unique<gen::HashEmbedder>(index.dim());
  } else {
    embedder = std::make_unique<gen::RemoteProvider>(provider_url);
  }
  if (index.empty()) {
    spdlog::warn("index is empty");
    return 0;
  }
  const auto q = retrieval::embed_query(query, *embedder, index.dim());
  std::cout << "rank\tid\tscore\tattribution\n" << std::setprecision(8);
  const auto hits = retrieval::retrieve(index, q, k);
  for (std::size_t i = 0; i < hits.size(); ++i) {
    std::cout << i + 1 << '\t' << hits[i].id << '\t' << hits[i].score << '\t'
              << index.attribution(hits[i].id) << '\n';
  }
  return 0;
}

struct IngestArgs {
  fs::path src;
  std::string format = "gutenberg";
  fs::path out;
  fs::path offensive;
  fs::path lexicon;
  fs::path freq_out;
  double fraction = 0.07;
  double threshold = 0.9;
  std::size_t extract_limit = corpus::kExtractTokenLimit;
};

int cmd_ingest(const IngestArgs& a) {
  const auto format = corpus::parse_source_format(a.format);
  corpus::IngestOptions options;
  if (!a.offensive.empty()) options.offensive = text::load_word_list(a.offensive);
  options.sentiment_threshold = a.threshold;
  options.extract_limit = a.extract_limit;
  if (format == corpus::SourceFormat::kReddit) {
    if (a.lexicon.empty()) {
      spdlog::warn("no --lexicon given: Reddit stories are not sentiment-filtered");
    } else {
      options.sentiment = corpus::lexicon_sentiment_scorer(std::make_shared<const text::SentimentLexicon>(
          text::SentimentLexicon::load_sentiwordnet(a.lexicon)));
    }
  }
  const auto extracts = corpus::ingest(corpus::load_raw_stories(a.src, format), options);
  corpus::write_corpus_jsonl(a.out, extracts);
  spdlog::info("wrote {} extracts to {}", extracts.size(), a.out.string());
  if (!a.freq_out.empty()) {
    std::vector<std::string> stories;
    for (const auto& e : extracts) stories.push_back(corpus::extract_story(e));
    const auto freq = corpus::build_frequent_words(stories, a.fraction);
    freq.save(a.freq_out);
    spdlog::info("wrote {} frequent words to {}", freq.size(), a.freq_out.string());
  }
  return 0;
}

int cmd_stats(const fs::path& in, const fs::path& freq_out) {
  std::vector<std::string> stories;
  for (const auto& e : corpus::read_corpus_jsonl(in)) stories.push_back(corpus::extract_story(e));
  const auto stats = corpus::corpus_stats(stories);
  corpus::write_stats_tsv(std::cout, stats);
  if (!freq_out.empty()) {
    std::ofstream out(freq_out);
    corpus::write_frequency_tsv(out, stats);
  }
  return 0;
}

int cmd_embed_index(const fs::path& captions, std::size_t dim, const fs::path& out) {
  // id TAB caption [TAB attribution]
  const gen::HashEmbedder embedder(dim);
  retrieval::EmbeddingIndex index(dim);
  for (const auto& line : read_lines(captions)) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, '\t')) fields.push_back(f);
    if (fields.size() < 2) throw std::runtime_error("caption line needs id TAB caption: " + line);
    index.add(fields[0], embedder.embed_one(fields[1]), fields.size() > 2 ? fields[2] : "");
  }
  index.save(out);
  spdlog::info("wrote {} vectors of dim {} to {}", index.size(), dim, out.string());
  return 0;
}

httplib::Server* g_server = nullptr;

void run_server(httplib::Server& server, const std::string& host, int port) {
  g_server = &server;
  std::signal(SIGINT, [](int) { if (g_server) g_server->stop(); });
  std::signal(SIGTERM, [](int) { if (g_server) g_server->stop(); });
  spdlog::info("listening on http://{}:{}", host, port);
  if (!server.listen(host, port)) throw std::runtime_error("cannot listen on port " + std::to_string(port));
}

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
  fs::path corpus;
  fs::path preset_corpus;
  fs::path index;
  fs::path lexicon;
  fs::path data_dir;
  std::string provider_url;
};

int cmd_serve(const ServeArgs& a) {
  std::shared_ptr<const retrieval::EmbeddingIndex> index;
  if (!a.index.empty()) {
    index = std::make_shared<const retrieval::EmbeddingIndex>(retrieval::EmbeddingIndex::load(a.index));
  }
  text::SentimentLexicon lexicon;
  if (!a.lexicon.empty()) lexicon = text::SentimentLexicon::load_sentiwordnet(a.lexicon);

  std::vector<corpus::CleanExtract> extracts;
  if (!a.corpus.empty()) extracts = corpus::read_corpus_jsonl(a.corpus);

  service::ServiceResources resources;
  if (a.provider_url.empty()) {
    if (extracts.empty()) throw std::runtime_error("the built-in provider needs --corpus");
    std::vector<corpus::CleanExtract> preset;
    if (!a.preset_corpus.empty()) preset = corpus::read_corpus_jsonl(a.preset_corpus);
    resources = service::make_builtin_resources(extracts, std::move(lexicon), index,
                                                preset.empty() ? nullptr : &preset);
  } else {
    auto remote = std::make_shared<const gen::RemoteProvider>(a.provider_url);
    auto scoring = std::make_shared<text::ScoringContext>();
    scoring->lexicon = std::move(lexicon);
    if (!extracts.empty()) {
      std::vector<std::string> stories;
      for (const auto& e : extracts) stories.push_back(corpus::extract_story(e));
      scoring->frequent_words = corpus::build_frequent_words(stories);
    }
    scoring->logit_pair = text::LogitPair{remote->logit_provider(gen::ModelRole::kPreset),
                                          remote->logit_provider(gen::ModelRole::kFinetuned)};
    resources.completion = remote;
    resources.embedder = remote;
    resources.scoring = std::move(scoring);
    resources.index = index;
  }

  auto store = a.data_dir.empty() ? std::make_shared<service::StoryStore>()
                                  : std::make_shared<service::StoryStore>(a.data_dir);
  service::StoryService svc(std::move(resources), {}, store);
  httplib::Server server;
  service::mount_story_routes(server, svc);
  run_server(server, a.host, a.port);
  return 0;
}

int cmd_provide(const std::string& host, int port, const fs::path& corpus_path,
                const fs::path& preset_path, std::size_t embed_dim) {
  const auto extracts = corpus::read_corpus_jsonl(corpus_path);
  auto tale = std::make_shared<const gen::NGramProvider>(train_model(extracts, service::kBuiltinOrder));
  std::shared_ptr<const gen::NGramProvider> preset;
  if (preset_path.empty()) {
    preset = std::make_shared<const gen::NGramProvider>(train_model(extracts, 1));
  } else {
    preset = std::make_shared<const gen::NGramProvider>(
        train_model(corpus::read_corpus_jsonl(preset_path), service::kBuiltinOrder));
  }
  httplib::Server server;
  gen::mount_provider_routes(server, {tale, preset, tale, std::make_shared<const gen::HashEmbedder>(embed_dim)});
  run_server(server, host, port);
  return 0;
}

int cmd_complete(const fs::path& corpus_path, const std::string& context, gen::GeneratorConfig config,
                 int n) {
  const gen::NGramProvider provider(train_model(corpus::read_corpus_jsonl(corpus_path), service::kBuiltinOrder));
  const auto r = provider.complete({context, config, n});
  for (const auto& c : r.candidates) std::cout << c << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"taletailor: story co-writing toolkit"};
  app.require_subcommand(1);

  fs::path rank_in, rank_ctx;
  auto* rank = app.add_subcommand("rank", "Score and rank candidate texts (one per line)");
  rank->add_option("--in", rank_in, "Candidates file")->required()->check(CLI::ExistingFile);
  rank->add_option("--ctx", rank_ctx, "Directory with lexicon.tsv, freq_words.txt, corpus.jsonl")
      ->required()
      ->check(CLI::ExistingDirectory);

  fs::path ret_index;
  std::string ret_query, ret_provider;
  std::size_t ret_k = 3;
  auto* retrieve = app.add_subcommand("retrieve", "Top-k images for a text query");
  retrieve->add_option("--index", ret_index, "TTIX index file")->required()->check(CLI::ExistingFile);
  retrieve->add_option("--query", ret_query, "Query text")->required();
  retrieve->add_option("--k", ret_k, "Number of hits")->check(CLI::PositiveNumber);
  retrieve->add_option("--provider-url", ret_provider, "Embed remotely instead of hashing");

  IngestArgs ing;
  auto* ingest = app.add_subcommand("ingest", "Clean and segment raw stories into corpus JSONL");
  ingest->add_option("--src", ing.src, "Source file or directory")->required()->check(CLI::ExistingPath);
  ingest->add_option("--format", ing.format, "gutenberg or reddit")
      ->check(CLI::IsMember({"gutenberg", "reddit"}));
  ingest->add_option("--out", ing.out, "Output JSONL")->required();
  ingest->add_option("--offensive", ing.offensive, "Word list to remove")->check(CLI::ExistingFile);
  ingest->add_option("--lexicon", ing.lexicon, "SentiWordNet file for the Reddit sentiment filter")
      ->check(CLI::ExistingFile);
  ingest->add_option("--threshold", ing.threshold, "Sentiment threshold (strict)");
  ingest->add_option("--freq-out", ing.freq_out, "Also write the frequent-word set here");
  ingest->add_option("--fraction", ing.fraction, "Frequent-word fraction of the vocabulary");
  ingest->add_option("--extract-limit", ing.extract_limit, "Maximum whitespace tokens per extract")
      ->check(CLI::PositiveNumber);

  fs::path stats_in, stats_freq;
  auto* stats = app.add_subcommand("stats", "Corpus statistics as TSV");
  stats->add_option("--in", stats_in, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  stats->add_option("--freq-out", stats_freq, "Write the word frequency table here");

  fs::path ei_captions, ei_out;
  std::size_t ei_dim = 64;
  auto* embed_index = app.add_subcommand("embed-index", "Build a TTIX index from captions");
  embed_index->add_option("--captions", ei_captions, "id TAB caption [TAB attribution] lines")
      ->required()
      ->check(CLI::ExistingFile);
  embed_index->add_option("--dim", ei_dim, "Embedding dimension")->check(CLI::PositiveNumber);
  embed_index->add_option("--out", ei_out, "Output index")->required();

  ServeArgs sv;
  auto* serve = app.add_subcommand("serve", "Run the story service");
  serve->add_option("--host", sv.host)->envname("TALETAILOR_HOST");
  serve->add_option("--port", sv.port)->envname("TALETAILOR_PORT");
  serve->add_option("--corpus", sv.corpus, "Corpus JSONL for the built-in provider")
      ->envname("TALETAILOR_CORPUS");
  serve->add_option("--preset-corpus", sv.preset_corpus, "General-prose corpus for the preset model")
      ->envname("TALETAILOR_PRESET_CORPUS");
  serve->add_option("--index", sv.index, "TTIX image index")->envname("TALETAILOR_INDEX");
  serve->add_option("--lexicon", sv.lexicon, "SentiWordNet file")->envname("TALETAILOR_LEXICON");
  serve->add_option("--data-dir", sv.data_dir, "Story storage directory (memory only if absent)")
      ->envname("TALETAILOR_DATA_DIR");
  serve->add_option("--provider-url", sv.provider_url, "Remote provider base URL")
      ->envname("TALETAILOR_PROVIDER_URL");

  std::string pv_host = "127.0.0.1";
  int pv_port = 8081;
  fs::path pv_corpus, pv_preset;
  std::size_t pv_dim = 64;
  auto* provide = app.add_subcommand("provide", "Serve the built-in n-gram provider over HTTP");
  provide->add_option("--host", pv_host);
  provide->add_option("--port", pv_port);
  provide->add_option("--corpus", pv_corpus)->required()->check(CLI::ExistingFile);
  provide->add_option("--preset-corpus", pv_preset)->check(CLI::ExistingFile);
  provide->add_option("--embed-dim", pv_dim)->check(CLI::PositiveNumber);

  fs::path cp_corpus;
  std::string cp_context, cp_mode = "nucleus";
  gen::GeneratorConfig cp_config;
  int cp_n = 3;
  auto* complete = app.add_subcommand("complete", "Sample completions from the built-in model");
  complete->add_option("--corpus", cp_corpus)->required()->check(CLI::ExistingFile);
  complete->add_option("--context", cp_context);
  complete->add_option("--mode", cp_mode)->check(CLI::IsMember({"nucleus", "top_k"}));
  complete->add_option("--p", cp_config.p);
  complete->add_option("--k", cp_config.k);
  complete->add_option("--max-tokens", cp_config.max_tokens);
  complete->add_option("--seed", cp_config.seed);
  complete->add_option("--n", cp_n)->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*rank) return cmd_rank(rank_in, rank_ctx);
    if (*retrieve) return cmd_retrieve(ret_index, ret_query, ret_k, ret_provider);
    if (*ingest) return cmd_ingest(ing);
    if (*stats) return cmd_stats(stats_in, stats_freq);
    if (*embed_index) return cmd_embed_index(ei_captions, ei_dim, ei_out);
    if (*serve) return cmd_serve(sv);
    if (*provide) return cmd_provide(pv_host, pv_port, pv_corpus, pv_preset, pv_dim);
    if (*complete) {
      cp_config.mode = gen::parse_sampling_mode(cp_mode);
      cp_config.validate();
      return cmd_complete(cp_corpus, cp_context, cp_config, cp_n);
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
