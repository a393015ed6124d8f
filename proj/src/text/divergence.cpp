#include "taletailor/text/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace taletailor::text {

TokenDistribution TokenDistribution::from_probabilities(std::vector<double> probabilities) {
  if (probabilities.empty()) throw std::invalid_argument("distribution is empty");
  double sum = 0.0;
  for (double p : probabilities) {
    if (!std::isfinite(p) || p < 0.0) {
      throw std::invalid_argument("distribution has a negative or non-finite entry");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("distribution sums to " + std::to_string(sum) + ", not 1");
  }
  return TokenDistribution(std::move(probabilities));
}

TokenDistribution TokenDistribution::from_logits(std::span<const double> logits) {
  return TokenDistribution(softmax(logits));
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("softmax of empty vector");
  const double max = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

double kl_divergence(std::span<const double> q, std::span<const double> p) {
  if (q.size() != p.size()) throw std::invalid_argument("kl_divergence: size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] <= 0.0) continue;
    const double ref = std::max(p[i], kProbabilityFloor);
    total += q[i] * (std::log(q[i]) - std::log(ref));
  }
  return total;
}

double tale_like(std::span<const TokenDistribution> preset,
                 std::span<const TokenDistribution> finetuned) {
  if (preset.size() != finetuned.size()) {
    throw std::invalid_argument("tale_like: position count mismatch");
  }
  if (preset.empty()) throw std::invalid_argument("tale_like: no positions");
  double sum = 0.0;
  for (std::size_t i = 0; i < preset.size(); ++i) {
    if (preset[i].size() != finetuned[i].size()) {
      throw std::invalid_argument("tale_like: vocabulary size mismatch at position " +
                                  std::to_string(i));
    }
    sum += kl_divergence(finetuned[i].probabilities(), preset[i].probabilities());
  }
  return sum / static_cast<double>(preset.size());
}

}  // namespace taletailor::text
