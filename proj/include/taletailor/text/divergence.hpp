#pragma once

#include <span>
#include <vector>

namespace taletailor::text {

/// Floor applied to a reference probability that is zero where the other
/// distribution has mass.
inline constexpr double kProbabilityFloor = 1e-12;

/// Probability vector over a vocabulary. Construction validates that entries
/// are finite, nonnegative and sum to 1 within 1e-9.
class TokenDistribution {
 public:
  TokenDistribution() = default;

  static TokenDistribution from_probabilities(std::vector<double> probabilities);
  static TokenDistribution from_logits(std::span<const double> logits);

  std::span<const double> probabilities() const { return probabilities_; }
  std::size_t size() const { return probabilities_.size(); }
  double operator[](std::size_t i) const { return probabilities_[i]; }

 private:
  explicit TokenDistribution(std::vector<double> p) : probabilities_(std::move(p)) {}
  std::vector<double> probabilities_;
};

std::vector<double> softmax(std::span<const double> logits);

/// D_KL(q || p) = sum_v q(v) (ln q(v) - ln p(v)), natural log. Terms with
/// q(v) = 0 contribute nothing; p(v) is floored at kProbabilityFloor.
/// Throws std::invalid_argument on size mismatch.
double kl_divergence(std::span<const double> q, std::span<const double> p);

/// Mean over positions of D_KL(finetuned || preset). Higher means the text
/// looks more like the fine-tuned model than the preset one.
double tale_like(std::span<const TokenDistribution> preset,
                 std::span<const TokenDistribution> finetuned);

}  // namespace taletailor::text
