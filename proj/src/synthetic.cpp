#include "wordbias/synthetic.hpp"

#include <cmath>
#include <cstdio>

namespace wordbias {

namespace {

std::string numbered(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%03zu", prefix, i);
  return buf;
}

void normalize(std::vector<double>& v) {
  const double n = norm(v);
  for (double& x : v) x /= n;
}

void add_noise(std::vector<double>& v, double scale, Rng& rng) {
  if (scale == 0.0) return;
  for (double& x : v) x += scale * rng.normal();
}

// Symmetric offsets along the bias axis: consecutive words mirror each other,
// an unpaired last word sits at 0.
double neutral_offset(std::size_t i, std::size_t count) {
  const std::size_t pairs = count / 2;
  const std::size_t k = i / 2;
  if (k >= pairs) return 0.0;
  const double magnitude = 0.2 + 0.6 * static_cast<double>(k + 1) / static_cast<double>(pairs + 1);
  return i % 2 == 0 ? magnitude : -magnitude;
}

std::vector<std::string> names(const char* prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(numbered(prefix, i));
  return out;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (!(bias_strength >= 0.0 && bias_strength <= 1.0)) {
    throw InvalidArgument("synthetic: bias strength must lie in [0, 1]");
  }
  if (dim < 4) throw InvalidArgument("synthetic: dimension must be at least 4");
  if (t1_size == 0 || t2_size == 0 || a1_size == 0 || a2_size == 0) {
    throw InvalidArgument("synthetic: word sets must be non-empty");
  }
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) {
    throw InvalidArgument("synthetic: noise scale must be >= 0");
  }
}

std::pair<Embedding, WordSetQuad> make_biased_embedding(const SyntheticSpec& spec) {
  spec.validate();
  const std::size_t d = spec.dim;
  const double beta = spec.bias_strength;
  Rng rng(mix_seed(spec.seed, 1));

  WordSetQuad quad{names("t1w", spec.t1_size), names("t2w", spec.t2_size),
                   names("a1w", spec.a1_size), names("a2w", spec.a2_size)};
  std::vector<std::string> words;
  std::vector<std::vector<double>> rows;

  auto add_targets = [&](const std::vector<std::string>& set, double sign) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      std::vector<double> neutral(d, 0.0);
      neutral[0] = neutral_offset(i, set.size());
      neutral[1] = 1.0;
      add_noise(neutral, spec.noise_scale, rng);
      normalize(neutral);
      std::vector<double> v(d, 0.0);
      for (std::size_t k = 0; k < d; ++k) v[k] = (1.0 - beta) * neutral[k];
      v[0] += beta * sign;
      normalize(v);
      words.push_back(set[i]);
      rows.push_back(std::move(v));
    }
  };
  auto add_attributes = [&](const std::vector<std::string>& set, double sign,
                            std::size_t spread_offset) {
    const std::size_t spread_dims = d - 2;
    for (std::size_t i = 0; i < set.size(); ++i) {
      std::vector<double> v(d, 0.0);
      v[0] = sign;
      const std::size_t axis = 2 + (i + spread_offset) % spread_dims;
      v[axis] = (i % 2 == 0 ? 0.5 : -0.5);
      add_noise(v, spec.noise_scale, rng);
      normalize(v);
      words.push_back(set[i]);
      rows.push_back(std::move(v));
    }
  };

  add_targets(quad.t1, +1.0);
  add_targets(quad.t2, -1.0);
  add_attributes(quad.a1, +1.0, 0);
  add_attributes(quad.a2, -1.0, spec.a1_size);

  Rng filler_rng(mix_seed(spec.seed, 2));
  for (std::size_t i = 0; i < spec.filler_size; ++i) {
    std::vector<double> v(d);
    do {
      for (double& x : v) x = filler_rng.normal();
    } while (norm(v) == 0.0);
    normalize(v);
    words.push_back(numbered("fill", i));
    rows.push_back(std::move(v));
  }
  return {Embedding::from_rows(std::move(words), rows, d), std::move(quad)};
}

LabeledCorpus make_biased_corpus(const SyntheticSpec& spec, std::size_t docs_per_group) {
  spec.validate();
  if (docs_per_group < 10) {
    throw InvalidArgument("synthetic corpus: at least 10 documents per group are required");
  }
  if (spec.filler_size == 0) throw InvalidArgument("synthetic corpus: filler words are required");
  const std::vector<std::string> t1 = names("t1w", spec.t1_size);
  const std::vector<std::string> t2 = names("t2w", spec.t2_size);
  const std::vector<std::string> a1 = names("a1w", spec.a1_size);
  const std::vector<std::string> a2 = names("a2w", spec.a2_size);
  const std::vector<std::string> fillers = names("fill", spec.filler_size);

  constexpr double kContentFidelity = 0.8;
  constexpr double kMaxStereotypeRate = 0.3;
  constexpr std::size_t kContentTokens = 2;
  constexpr std::size_t kFillerTokens = 3;

  Rng rng(mix_seed(spec.seed, 3));
  auto pick = [&](const std::vector<std::string>& from) { return from[rng.below(from.size())]; };

  LabeledCorpus corpus;
  corpus.reserve(2 * docs_per_group);
  for (int group = 0; group < 2; ++group) {
    const auto& targets = group == 0 ? t1 : t2;
    const auto& stereotyped = group == 0 ? a1 : a2;
    for (std::size_t n = 0; n < docs_per_group; ++n) {
      LabeledDocument doc;
      const bool hate = rng.uniform() < 0.5;
      doc.hate = hate ? HateLabel::kHate : HateLabel::kNonHate;
      doc.group = group == 0 ? kGroupOne : kGroupTwo;
      doc.tokens.push_back(pick(targets));
      for (std::size_t k = 0; k < kContentTokens; ++k) {
        const bool faithful = rng.uniform() < kContentFidelity;
        doc.tokens.push_back(pick((hate == faithful) ? a1 : a2));
      }
      if (rng.uniform() < kMaxStereotypeRate * spec.bias_strength) {
        doc.tokens.push_back(pick(stereotyped));
      }
      for (std::size_t k = 0; k < kFillerTokens; ++k) doc.tokens.push_back(pick(fillers));
      if (hate && rng.uniform() < 0.5) doc.tokens.push_back(kHateMarker);
      corpus.push_back(std::move(doc));
    }
  }
  return corpus;
}

WordSetQuad mismatched_wordsets(const SyntheticSpec& spec, std::uint64_t seed) {
  const std::size_t per_set = std::min<std::size_t>(8, spec.filler_size / 4);
  if (per_set < 2) throw InvalidArgument("synthetic: not enough filler words for mismatched sets");
  std::vector<std::string> fillers = names("fill", spec.filler_size);
  Rng rng(seed);
  rng.shuffle(fillers);
  WordSetQuad q;
  for (std::size_t i = 0; i < per_set; ++i) {
    q.t1.push_back(fillers[i]);
    q.t2.push_back(fillers[per_set + i]);
    q.a1.push_back(fillers[2 * per_set + i]);
    q.a2.push_back(fillers[3 * per_set + i]);
  }
  return q;
}

}  // namespace wordbias
