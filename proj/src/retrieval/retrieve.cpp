#include <omp.h>

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "taletailor/retrieval/embedding_index.hpp"

namespace taletailor::retrieval {

namespace {

struct Scored {
  double score;
  std::size_t row;
};

// Four fixed accumulators; the summation order is the same on every call.
double dot(const float* row, const double* query, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    s0 += static_cast<double>(row[j]) * query[j];
    s1 += static_cast<double>(row[j + 1]) * query[j + 1];
    s2 += static_cast<double>(row[j + 2]) * query[j + 2];
    s3 += static_cast<double>(row[j + 3]) * query[j + 3];
  }
  for (; j < n; ++j) s0 += static_cast<double>(row[j]) * query[j];
  return std::clamp((s0 + s1) + (s2 + s3), -1.0, 1.0);
}

std::vector<double> unit_query(const EmbeddingIndex& index, std::span<const float> query,
                               std::size_t k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (query.size() != index.dim()) {
    throw std::invalid_argument("query dimension " + std::to_string(query.size()) +
                                " does not match index dimension " + std::to_string(index.dim()));
  }
  double norm = 0.0;
  for (float x : query) {
    if (!std::isfinite(x)) throw std::invalid_argument("query has a non-finite component");
    norm += static_cast<double>(x) * x;
  }
  norm = std::sqrt(norm);
  if (norm == 0.0) throw std::invalid_argument("query vector is zero");
  std::vector<double> q(query.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = query[i] / norm;
  return q;
}

struct Better {
  const EmbeddingIndex* index;
  bool operator()(const Scored& a, const Scored& b) const {
    if (a.score != b.score) return a.score > b.score;
    return index->id(a.row) < index->id(b.row);
  }
};

RetrievalResult to_result(const EmbeddingIndex& index, const std::vector<Scored>& best) {
  RetrievalResult out;
  out.reserve(best.size());
  for (const auto& s : best) out.push_back(Hit{index.id(s.row), s.score});
  return out;
}

}  // namespace

RetrievalResult retrieve(const EmbeddingIndex& index, std::span<const float> query, std::size_t k) {
  const auto q = unit_query(index, query, k);
  const std::size_t n = index.size();
  const std::size_t keep = std::min(k, n);
  if (keep == 0) return {};
  const Better better{&index};
  const float* data = index.data().data();
  const std::size_t dim = index.dim();

  std::vector<Scored> merged;
#pragma omp parallel
  {
    // Per-thread bounded heap; the worst kept entry sits on top.
    std::priority_queue<Scored, std::vector<Scored>, Better> heap(better);
#pragma omp for schedule(static) nowait
    for (long i = 0; i < static_cast<long>(n); ++i) {
      const auto row = static_cast<std::size_t>(i);
      const Scored s{dot(data + row * dim, q.data(), dim), row};
      if (heap.size() < keep) {
        heap.push(s);
      } else if (better(s, heap.top())) {
        heap.pop();
        heap.push(s);
      }
    }
#pragma omp critical
    {
      while (!heap.empty()) {
        merged.push_back(heap.top());
        heap.pop();
      }
    }
  }
  std::sort(merged.begin(), merged.end(), better);
  merged.resize(keep);
  return to_result(index, merged);
}

RetrievalResult retrieve_serial(const EmbeddingIndex& index, std::span<const float> query,
                                std::size_t k) {
  const auto q = unit_query(index, query, k);
  std::vector<Scored> all;
  all.reserve(index.size());
  for (std::size_t row = 0; row < index.size(); ++row) {
    all.push_back(Scored{dot(index.vector(row).data(), q.data(), index.dim()), row});
  }
  std::sort(all.begin(), all.end(), Better{&index});
  all.resize(std::min(k, all.size()));
  return to_result(index, all);
}

std::vector<float> embed_query(std::string_view text, const gen::EmbeddingProvider& provider,
                               std::size_t expected_dim) {
  const std::vector<std::string> batch{std::string(text)};
  auto vectors = provider.embed(batch);
  if (vectors.size() != 1) throw std::runtime_error("embedding provider returned a wrong batch size");
  auto& v = vectors.front();
  if (v.size() != expected_dim) {
    throw std::invalid_argument("query embedding has dimension " + std::to_string(v.size()) +
                                ", index expects " + std::to_string(expected_dim));
  }
  double norm = 0.0;
  for (float x : v) norm += static_cast<double>(x) * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) throw std::runtime_error("embedding provider returned a zero vector");
  for (float& x : v) x = static_cast<float>(x / norm);
  return v;
}

}  // namespace taletailor::retrieval
