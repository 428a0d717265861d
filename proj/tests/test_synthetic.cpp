#include <doctest.h>

#include <cmath>

#include "wordbias/common.hpp"
#include "wordbias/extraction.hpp"
#include "wordbias/extrinsic.hpp"
#include "wordbias/intrinsic.hpp"
#include "wordbias/synthetic.hpp"

using namespace wordbias;

namespace {

double recall_bias(const SyntheticSpec& spec, std::uint64_t clf_seed) {
  const auto [e, quad] = make_biased_embedding(spec);
  SyntheticSpec test_spec = spec;
  test_spec.seed = mix_seed(spec.seed, 100);
  const auto clf = train_standin_classifier(make_biased_corpus(spec, 300), e, 1.0, clf_seed);
  const auto records = predict_records(clf, make_biased_corpus(test_spec, 300), e);
  return bias_score(records, kGroupOne, kGroupTwo, Measure::kRecall);
}

}  // namespace

TEST_CASE("embedding endpoints of the bias grid") {
  SyntheticSpec spec;
  spec.bias_strength = 0.0;
  auto [e0, q0] = make_biased_embedding(spec);
  CHECK(std::fabs(weat(e0, q0).effect_size) < 1e-9);
  spec.bias_strength = 1.0;
  auto [e1, q1] = make_biased_embedding(spec);
  CHECK(std::fabs(weat(e1, q1).effect_size - 2.0) < 1e-6);
  for (std::size_t i = 0; i < e1.size(); ++i) CHECK(std::fabs(norm(e1.row(i)) - 1.0) < 1e-12);
  CHECK(e1.size() == 8 * 4 + 64);
  CHECK_FALSE(e1.contains(kHateMarker));
}

TEST_CASE("effect size increases strictly along the grid with noise") {
  for (std::uint64_t seed : {0, 1, 2}) {
    SyntheticSpec spec;
    spec.noise_scale = 0.05;
    spec.seed = seed;
    double previous = -3.0;
    for (int k = 0; k <= 10; ++k) {
      spec.bias_strength = k / 10.0;
      const auto [e, q] = make_biased_embedding(spec);
      const double d = weat(e, q).effect_size;
      CHECK(d > previous);
      previous = d;
    }
  }
}

TEST_CASE("generation is deterministic and validated") {
  SyntheticSpec spec;
  spec.bias_strength = 0.4;
  spec.noise_scale = 0.1;
  spec.seed = 9;
  CHECK(make_biased_embedding(spec).first == make_biased_embedding(spec).first);
  const auto a = make_biased_corpus(spec, 20);
  const auto b = make_biased_corpus(spec, 20);
  REQUIRE(a.size() == 40);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].tokens == b[i].tokens);
    CHECK_FALSE(a[i].tokens.empty());
  }
  CHECK_THROWS_AS(make_biased_corpus(spec, 9), InvalidArgument);
  SyntheticSpec bad = spec;
  bad.bias_strength = 1.5;
  CHECK_THROWS_AS(make_biased_embedding(bad), InvalidArgument);
  bad = spec;
  bad.dim = 3;
  CHECK_THROWS_AS(make_biased_embedding(bad), InvalidArgument);
  bad = spec;
  bad.noise_scale = -1;
  CHECK_THROWS_AS(make_biased_embedding(bad), InvalidArgument);
}

TEST_CASE("mismatched word sets are disjoint filler words") {
  SyntheticSpec spec;
  const auto q = mismatched_wordsets(spec, 3);
  q.validate();
  CHECK(q.t1.size() == 8);
  for (const auto& w : q.a2) CHECK(w.rfind("fill", 0) == 0);
  CHECK(mismatched_wordsets(spec, 3) == q);
}

TEST_CASE("unbiased corpus gives near-zero extrinsic bias") {
  SyntheticSpec spec;
  double sum = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    spec.seed = seed;
    sum += recall_bias(spec, seed);
  }
  CHECK(std::fabs(sum / 10) <= 0.05);
}

TEST_CASE("extrinsic bias grows with bias strength") {
  SyntheticSpec spec;
  spec.seed = 4;
  spec.bias_strength = 0.0;
  const double low = recall_bias(spec, 0);
  spec.bias_strength = 1.0;
  const double high = recall_bias(spec, 0);
  CHECK(high > low + 0.2);
}

TEST_CASE("swapping group labels negates the bias score") {
  SyntheticSpec spec;
  spec.bias_strength = 0.6;
  spec.seed = 2;
  const auto [e, q] = make_biased_embedding(spec);
  const auto corpus = make_biased_corpus(spec, 200);
  auto swapped = corpus;
  for (auto& d : swapped) d.group = d.group == kGroupOne ? kGroupTwo : kGroupOne;
  const auto clf = train_standin_classifier(corpus, e, 1.0, 0);
  const auto clf_swapped = train_standin_classifier(swapped, e, 1.0, 0);
  const double b = bias_score(predict_records(clf, corpus, e), kGroupOne, kGroupTwo, Measure::kF1);
  const double bs =
      bias_score(predict_records(clf_swapped, swapped, e), kGroupOne, kGroupTwo, Measure::kF1);
  CHECK(std::fabs(b + bs) < 1e-12);
}

TEST_CASE("planted exclusive tokens surface first in extraction") {
  SyntheticSpec spec;
  spec.bias_strength = 0.5;
  const auto corpus = make_biased_corpus(spec, 200);
  const auto hate = extract_candidates(corpus, LabelAxis::kHate, "HS");
  REQUIRE_FALSE(hate.empty());
  CHECK(hate[0].word == kHateMarker);
  // Group-one documents are the only ones carrying t1 words.
  const auto group = extract_candidates(corpus, LabelAxis::kGroup, kGroupOne);
  REQUIRE(group.size() >= spec.t1_size);
  for (std::size_t i = 0; i < spec.t1_size; ++i) CHECK(group[i].word.rfind("t1w", 0) == 0);
}
