#include "wordbias/intrinsic.hpp"

#include <cmath>

namespace wordbias {

namespace {

std::vector<std::vector<double>> resolve_all(const Embedding& e,
                                             const std::vector<std::string>& words) {
  std::vector<std::vector<double>> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(e.vector_of(w));
  return out;
}

double mean_cosine(std::span<const double> t, const std::vector<std::vector<double>>& attrs) {
  double s = 0.0;
  for (const auto& a : attrs) s += cosine(t, a);
  return s / static_cast<double>(attrs.size());
}

}  // namespace

double weat_association(const Embedding& e, const std::string& target,
                        const std::vector<std::string>& a1, const std::vector<std::string>& a2) {
  if (a1.empty() || a2.empty()) throw InvalidArgument("weat: attribute sets must be non-empty");
  const auto t = e.vector_of(target);
  return mean_cosine(t, resolve_all(e, a1)) - mean_cosine(t, resolve_all(e, a2));
}

WeatResult weat(const Embedding& e, const WordSetQuad& quad) {
  if (quad.t1.size() != quad.t2.size()) {
    throw InvalidArgument("weat: target sets differ in size (" + std::to_string(quad.t1.size()) +
                          " vs " + std::to_string(quad.t2.size()) + ")");
  }
  if (quad.t1.size() < 2) throw InvalidArgument("weat: target sets need at least two words");
  if (quad.a1.empty() || quad.a2.empty()) {
    throw InvalidArgument("weat: attribute sets must be non-empty");
  }
  const auto a1 = resolve_all(e, quad.a1);
  const auto a2 = resolve_all(e, quad.a2);
  auto assoc = [&](const std::string& w) {
    const auto t = e.vector_of(w);
    return mean_cosine(t, a1) - mean_cosine(t, a2);
  };

  std::vector<double> s1, s2;
  for (const auto& w : quad.t1) s1.push_back(assoc(w));
  for (const auto& w : quad.t2) s2.push_back(assoc(w));

  double sum1 = 0.0, sum2 = 0.0;
  for (double v : s1) sum1 += v;
  for (double v : s2) sum2 += v;
  const double n1 = static_cast<double>(s1.size());
  const double n2 = static_cast<double>(s2.size());

  const double mean_all = (sum1 + sum2) / (n1 + n2);
  double var = 0.0;
  for (double v : s1) var += (v - mean_all) * (v - mean_all);
  for (double v : s2) var += (v - mean_all) * (v - mean_all);
  var /= (n1 + n2);
  const double sd = std::sqrt(var);
  if (!(sd > 1e-12)) {
    throw DegenerateInputError("weat: every target word has the same association; "
                               "effect size is undefined");
  }

  WeatResult r;
  r.statistic = sum1 - sum2;
  r.effect_size = (sum1 / n1 - sum2 / n2) / sd;
  return r;
}

AttributeClassifier train_attribute_classifier(const Embedding& e,
                                               const std::vector<std::string>& a1,
                                               const std::vector<std::string>& a2,
                                               double regularization, std::uint64_t seed,
                                               const LogisticOptions& options) {
  if (a1.empty() || a2.empty()) {
    throw InvalidArgument("attribute classifier: both attribute sets must be non-empty");
  }
  std::vector<double> x;
  std::vector<int> y;
  x.reserve((a1.size() + a2.size()) * e.dim());
  for (const auto& w : a1) {
    auto v = e.vector_of(w);
    x.insert(x.end(), v.begin(), v.end());
    y.push_back(0);
  }
  for (const auto& w : a2) {
    auto v = e.vector_of(w);
    x.insert(x.end(), v.begin(), v.end());
    y.push_back(1);
  }
  return AttributeClassifier{train_logistic(x, e.dim(), y, regularization, seed, options)};
}

RnsbResult rnsb_from_probabilities(const std::vector<double>& p) {
  if (p.size() < 2) throw InvalidArgument("rnsb: at least two target sets are required");
  double total = 0.0;
  for (double v : p) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("rnsb: mean probabilities must be positive and finite");
    }
    total += v;
  }
  const double n = static_cast<double>(p.size());
  RnsbResult r;
  r.per_set_negative_probability = p;
  for (double v : p) {
    const double d = v / total;
    r.kl_value += d * std::log2(d * n);
  }
  // Rounding can leave a tiny negative residue for a uniform distribution.
  if (r.kl_value < 0.0) r.kl_value = 0.0;
  if (p.size() == 2) r.signed_value = (p[1] - p[0]) / (p[0] + p[1]);
  return r;
}

std::vector<std::uint64_t> default_rnsb_seeds() {
  return {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
}

std::vector<RnsbResult> rnsb_per_seed(const Embedding& e,
                                      const std::vector<std::vector<std::string>>& targets,
                                      const std::vector<std::string>& a1,
                                      const std::vector<std::string>& a2,
                                      const RnsbOptions& options) {
  if (targets.size() < 2) throw InvalidArgument("rnsb: at least two target sets are required");
  if (options.seeds.empty()) throw InvalidArgument("rnsb: seed list is empty");
  std::vector<std::vector<std::vector<double>>> target_vectors;
  for (const auto& set : targets) {
    if (set.empty()) throw InvalidArgument("rnsb: target sets must be non-empty");
    target_vectors.push_back(resolve_all(e, set));
  }

  std::vector<RnsbResult> out;
  for (std::uint64_t seed : options.seeds) {
    const auto clf =
        train_attribute_classifier(e, a1, a2, options.regularization, seed, options.training);
    std::vector<double> means;
    for (const auto& vecs : target_vectors) {
      double s = 0.0;
      for (const auto& v : vecs) s += clf.negative_probability(v);
      means.push_back(s / static_cast<double>(vecs.size()));
    }
    out.push_back(rnsb_from_probabilities(means));
  }
  return out;
}

RnsbResult rnsb(const Embedding& e, const std::vector<std::vector<std::string>>& targets,
                const std::vector<std::string>& a1, const std::vector<std::string>& a2,
                const RnsbOptions& options) {
  const auto runs = rnsb_per_seed(e, targets, a1, a2, options);
  RnsbResult avg;
  avg.per_set_negative_probability.assign(targets.size(), 0.0);
  double signed_sum = 0.0;
  for (const auto& r : runs) {
    avg.kl_value += r.kl_value;
    if (r.signed_value) signed_sum += *r.signed_value;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      avg.per_set_negative_probability[i] += r.per_set_negative_probability[i];
    }
  }
  const double n = static_cast<double>(runs.size());
  avg.kl_value /= n;
  for (double& v : avg.per_set_negative_probability) v /= n;
  if (targets.size() == 2) avg.signed_value = signed_sum / n;
  return avg;
}

}  // namespace wordbias
