#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "taletailor/text/metrics.hpp"

namespace taletailor::text {

namespace {

// Sentence x term tf-idf with raw counts and idf = 1 + ln(n / df).
Eigen::MatrixXd tfidf_matrix(const std::vector<std::vector<std::string>>& sentences) {
  std::map<std::string, Eigen::Index> columns;
  for (const auto& terms : sentences) {
    for (const auto& term : terms) columns.emplace(term, 0);
  }
  Eigen::Index next = 0;
  for (auto& [term, col] : columns) col = next++;

  const auto rows = static_cast<Eigen::Index>(sentences.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, next);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (const auto& term : sentences[static_cast<std::size_t>(r)]) m(r, columns[term]) += 1.0;
  }
  const double n = static_cast<double>(rows);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double df = static_cast<double>((m.col(c).array() > 0.0).count());
    m.col(c) *= 1.0 + std::log(n / df);
  }
  return m;
}

}  // namespace

double coherency(const TokenizedText& t) {
  const auto& sentences = t.sentence_terms;
  if (sentences.size() < 2) return 0.0;

  const Eigen::MatrixXd x = tfidf_matrix(sentences);
  if (x.cols() == 0) return 0.0;

  const auto rank = static_cast<Eigen::Index>(
      std::min({static_cast<std::size_t>(x.rows()), static_cast<std::size_t>(x.cols()),
                kMaxLsaRank}));
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU);
  // LSA coordinates: U_r * Sigma_r.
  const Eigen::MatrixXd embedding =
      svd.matrixU().leftCols(rank) * svd.singularValues().head(rank).asDiagonal();

  const Eigen::VectorXd first = embedding.row(0).transpose();
  const double first_norm = first.norm();
  double total = 0.0;
  for (Eigen::Index r = 1; r < embedding.rows(); ++r) {
    const Eigen::VectorXd other = embedding.row(r).transpose();
    const double denom = first_norm * other.norm();
    if (denom > 0.0) total += first.dot(other) / denom;
  }
  return total;
}

}  // namespace taletailor::text
