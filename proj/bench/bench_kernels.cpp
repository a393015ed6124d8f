// Times the OpenMP kernels against their serial references.
//   bench_kernels [vectors] [dim] [texts]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "taletailor/retrieval/embedding_index.hpp"
#include "taletailor/text/scoring.hpp"

using namespace taletailor;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double median_ms(int reps, F&& f) {
  std::vector<double> ms;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    f();
    ms.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
  std::sort(ms.begin(), ms.end());
  return ms[ms.size() / 2];
}

void report(const char* name, double parallel, double serial) {
  std::printf("%-28s parallel %9.2f ms   serial %9.2f ms   speedup %.2fx\n", name, parallel, serial,
              serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 100000;
  const std::size_t dim = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 512;
  const std::size_t texts = argc > 3 ? std::strtoul(argv[3], nullptr, 10) : 2000;
  std::printf("threads: %d\n", omp_get_max_threads());

  std::mt19937_64 rng(1);
  std::normal_distribution<float> g;
  retrieval::EmbeddingIndex index(dim);
  std::vector<float> v(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : v) x = g(rng);
    index.add("img" + std::to_string(i), v);
  }
  for (auto& x : v) x = g(rng);
  const double par = median_ms(9, [&] { retrieval::retrieve(index, v, 5); });
  const double ser = median_ms(9, [&] { retrieval::retrieve_serial(index, v, 5); });
  if (retrieval::retrieve(index, v, 5) != retrieval::retrieve_serial(index, v, 5)) {
    std::fprintf(stderr, "retrieve and retrieve_serial disagree\n");
    return 1;
  }
  char label[64];
  std::snprintf(label, sizeof label, "retrieve %zux%zu top-5", n, dim);
  report(label, par, ser);

  const std::vector<std::string> words = {"the", "king", "golden", "castle", "dark", "forest", "happy",
                                          "hen", "ran", "sang", "and", "crow", "river", "old", "miller"};
  std::vector<std::string> batch;
  for (std::size_t i = 0; i < texts; ++i) {
    std::string t;
    const int sentences = 1 + static_cast<int>(rng() % 5);
    for (int s = 0; s < sentences; ++s) {
      const int len = 3 + static_cast<int>(rng() % 12);
      for (int w = 0; w < len; ++w) t += words[rng() % words.size()] + (w + 1 < len ? " " : ". ");
    }
    batch.push_back(t);
  }
  text::ScoringContext ctx;
  const double spar = median_ms(5, [&] { text::score_batch(batch, ctx); });
  const double sser = median_ms(5, [&] { text::score_batch_serial(batch, ctx); });
  std::snprintf(label, sizeof label, "score_batch %zu texts", texts);
  report(label, spar, sser);
  return 0;
}
