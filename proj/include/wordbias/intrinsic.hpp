#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wordbias/embedding.hpp"
#include "wordbias/logistic.hpp"
#include "wordbias/wordsets.hpp"

namespace wordbias {

// Mean cosine of `target` to a1 minus mean cosine of `target` to a2.
double weat_association(const Embedding& e, const std::string& target,
                        const std::vector<std::string>& a1, const std::vector<std::string>& a2);

struct WeatResult {
  double statistic = 0.0;
  // Normalized by the population standard deviation, hence within [-2, 2].
  double effect_size = 0.0;
};

WeatResult weat(const Embedding& e, const WordSetQuad& quad);

// Logistic regression separating a1 (label 0) from a2 (label 1). The predicted
// probability is the probability of belonging to a2, the "negative" class.
struct AttributeClassifier {
  LogisticModel model;

  double regularization() const { return model.regularization; }
  std::uint64_t seed() const { return model.seed; }
  double negative_probability(std::span<const double> x) const {
    return model.predict_probability(x);
  }
};

AttributeClassifier train_attribute_classifier(const Embedding& e,
                                               const std::vector<std::string>& a1,
                                               const std::vector<std::string>& a2,
                                               double regularization, std::uint64_t seed,
                                               const LogisticOptions& options = {});

struct RnsbResult {
  double kl_value = 0.0;                 // bits
  std::optional<double> signed_value;    // only with exactly two target sets
  std::vector<double> per_set_negative_probability;
};

// KL divergence (bits) of the normalized mean probabilities from uniform, plus
// the signed two-set form (p2 - p1) / (p1 + p2).
RnsbResult rnsb_from_probabilities(const std::vector<double>& mean_negative_probability);

std::vector<std::uint64_t> default_rnsb_seeds();

struct RnsbOptions {
  double regularization = 1.0;
  std::vector<std::uint64_t> seeds = default_rnsb_seeds();
  LogisticOptions training;
};

// Trains one classifier per seed on the full attribute sets and averages the
// per-seed KL and signed values.
RnsbResult rnsb(const Embedding& e, const std::vector<std::vector<std::string>>& targets,
                const std::vector<std::string>& a1, const std::vector<std::string>& a2,
                const RnsbOptions& options = {});

// Per-seed results, in seed order; `rnsb` averages these.
std::vector<RnsbResult> rnsb_per_seed(const Embedding& e,
                                      const std::vector<std::vector<std::string>>& targets,
                                      const std::vector<std::string>& a1,
                                      const std::vector<std::string>& a2,
                                      const RnsbOptions& options = {});

}  // namespace wordbias
