#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "wordbias/common.hpp"
#include "wordbias/extraction.hpp"

using namespace wordbias;

namespace {

LabeledDocument doc(std::vector<std::string> tokens, HateLabel h, std::string group = "male") {
  return {std::move(tokens), h, std::move(group)};
}

LabeledCorpus random_corpus(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f", "g", "h"};
  const std::vector<std::string> groups{"male", "female", "neutral"};
  LabeledCorpus out;
  for (std::size_t i = 0; i < n; ++i) {
    LabeledDocument d;
    d.hate = i % 3 == 0 ? HateLabel::kHate : HateLabel::kNonHate;
    d.group = groups[i % 3 == 1 ? 2 : rng.below(2)];
    const std::size_t len = 1 + rng.below(6);
    for (std::size_t k = 0; k < len; ++k) {
      d.tokens.push_back(vocab[d.hate == HateLabel::kHate ? rng.below(5) : 3 + rng.below(5)]);
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

TEST_CASE("priors and zero-count theta") {
  LabeledCorpus c{doc({"x", "y"}, HateLabel::kHate), doc({"x"}, HateLabel::kHate),
                  doc({"z"}, HateLabel::kNonHate), doc({"z", "x"}, HateLabel::kNonHate)};
  const auto nb = estimate_nb(c, LabelAxis::kHate);
  CHECK(nb.labels == std::vector<std::string>{"HS", "NON_HS"});
  CHECK(nb.priors == std::vector<double>{0.5, 0.5});
  CHECK(nb.theta[nb.label_index("HS")][*nb.find_word("z")] == 0.0);
  CHECK(nb.document_frequency[*nb.find_word("x")] == 3);
  CHECK(nb.corpus_frequency[*nb.find_word("z")] == 2);
}

TEST_CASE("theta matches independent token counts") {
  const auto corpus = random_corpus(20, 1);
  for (double alpha : {0.0, 0.5}) {
    const auto nb = estimate_nb(corpus, LabelAxis::kHate, alpha);
    std::map<std::string, std::map<std::string, double>> counts;
    std::map<std::string, double> totals, docs;
    std::set<std::string> vocab;
    for (const auto& d : corpus) {
      const std::string l = d.hate == HateLabel::kHate ? "HS" : "NON_HS";
      docs[l] += 1;
      for (const auto& t : d.tokens) {
        counts[l][t] += 1;
        totals[l] += 1;
        vocab.insert(t);
      }
    }
    REQUIRE(nb.vocabulary.size() == vocab.size());
    for (const auto& l : nb.labels) {
      const auto li = nb.label_index(l);
      CHECK(std::fabs(nb.priors[li] - docs[l] / corpus.size()) < 1e-15);
      double sum = 0;
      for (const auto& w : vocab) {
        const double want = (counts[l][w] + alpha) / (totals[l] + alpha * vocab.size());
        CHECK(std::fabs(nb.theta[li][*nb.find_word(w)] - want) < 1e-15);
        sum += nb.theta[li][*nb.find_word(w)];
      }
      CHECK(std::fabs(sum - 1.0) < 1e-9);
    }
    CHECK(std::fabs(nb.priors[0] + nb.priors[1] - 1.0) < 1e-12);
  }
}

TEST_CASE("group axis leaves out neutral documents") {
  const auto corpus = random_corpus(30, 2);
  const auto nb = estimate_nb(corpus, LabelAxis::kGroup);
  CHECK(nb.labels == std::vector<std::string>{"female", "male"});
  std::size_t in_scope = 0;
  for (const auto& d : corpus) in_scope += d.group != "neutral";
  std::size_t counted = 0;
  for (std::size_t f : nb.corpus_frequency) counted += f;
  std::size_t tokens = 0;
  for (const auto& d : corpus) {
    if (d.group != "neutral") tokens += d.tokens.size();
  }
  CHECK(counted == tokens);
  CHECK_FALSE(in_axis_scope(doc({"a"}, HateLabel::kHate, "OTHER"), LabelAxis::kGroup));
  CHECK_FALSE(in_axis_scope(doc({"a"}, HateLabel::kHate, ""), LabelAxis::kGroup));
  CHECK(in_axis_scope(doc({"a"}, HateLabel::kHate, "OTHER"), LabelAxis::kHate));
}

TEST_CASE("estimate_nb errors") {
  CHECK_THROWS_AS(estimate_nb({}, LabelAxis::kHate), Error);
  CHECK_THROWS_AS(estimate_nb({doc({"a"}, HateLabel::kHate)}, LabelAxis::kHate), Error);
  CHECK_THROWS_AS(estimate_nb({doc({"a"}, HateLabel::kHate, "neutral"),
                               doc({"b"}, HateLabel::kHate, "male")},
                              LabelAxis::kGroup),
                  Error);
  LabeledCorpus ok{doc({"a"}, HateLabel::kHate), doc({"b"}, HateLabel::kNonHate)};
  CHECK_THROWS_AS(estimate_nb(ok, LabelAxis::kHate, -1.0), InvalidArgument);
}

TEST_CASE("pmi hand values and bounds") {
  LabeledCorpus c{doc({"only", "both"}, HateLabel::kHate), doc({"both"}, HateLabel::kHate),
                  doc({"both", "x"}, HateLabel::kNonHate), doc({"x"}, HateLabel::kNonHate)};
  const auto nb = estimate_nb(c, LabelAxis::kHate);
  CHECK(pmi(nb, "HS", "only") == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::isinf(pmi(nb, "NON_HS", "only")));
  CHECK(pmi(nb, "NON_HS", "only") < 0);
  CHECK_THROWS_AS(pmi(nb, "HS", "unknown"), Error);
  CHECK_THROWS_AS(pmi(nb, "MAYBE", "only"), Error);

  LabeledCorpus even{doc({"w", "a"}, HateLabel::kHate), doc({"w", "b"}, HateLabel::kNonHate)};
  const auto nb2 = estimate_nb(even, LabelAxis::kHate);
  CHECK(pmi(nb2, "HS", "w") == 0.0);
  CHECK(pmi(nb2, "NON_HS", "w") == 0.0);
}

TEST_CASE("pmi identities hold corpus-wide") {
  for (double alpha : {0.0, 1.0}) {
    const auto corpus = random_corpus(60, 3);
    for (auto axis : {LabelAxis::kHate, LabelAxis::kGroup}) {
      const auto nb = estimate_nb(corpus, axis, alpha);
      for (std::size_t l = 0; l < nb.labels.size(); ++l) {
        for (std::size_t w = 0; w < nb.vocabulary.size(); ++w) {
          const double p = pmi(nb, nb.labels[l], nb.vocabulary[w]);
          CHECK(p <= -std::log2(nb.priors[l]) + 1e-12);
          double marginal = 0;
          for (std::size_t k = 0; k < nb.labels.size(); ++k) marginal += nb.priors[k] * nb.theta[k][w];
          if (nb.theta[l][w] > 0) {
            CHECK(std::fabs(std::exp2(p) * marginal - nb.theta[l][w]) < 1e-9);
          }
          bool exclusive = nb.theta[l][w] > 0;
          for (std::size_t k = 0; k < nb.labels.size(); ++k) {
            if (k != l && nb.theta[k][w] > 0) exclusive = false;
          }
          if (exclusive && alpha == 0.0) {
            CHECK(std::fabs(p + std::log2(nb.priors[l])) < 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("extract_candidates ranking, filter and tie-break") {
  LabeledCorpus c;
  for (int i = 0; i < 40; ++i) {
    c.push_back(doc({"common"}, HateLabel::kHate));
    if (i < 10) c.back().tokens.push_back("planted");
    c.push_back(doc({"common", "other"}, HateLabel::kNonHate));
  }
  for (int i = 0; i < 9; ++i) c[2 * i + 20].tokens.push_back("rare");
  // "busy" and "quiet" are both HS-exclusive: equal PMI, busy is more frequent.
  for (int i = 0; i < 12; ++i) {
    c[2 * i].tokens.push_back("busy");
    c[2 * i].tokens.push_back("busy");
    c[2 * i].tokens.push_back("quiet");
  }
  const auto cands = extract_candidates(c, LabelAxis::kHate, "HS", {40, 10, 0.0});
  REQUIRE(cands.size() >= 3);
  CHECK(cands[0].word == "busy");
  CHECK(cands[1].word == "quiet");
  CHECK(cands[2].word == "planted");
  for (const auto& cw : cands) {
    CHECK(cw.word != "rare");
    CHECK(cw.document_frequency >= 10);
  }
  for (std::size_t i = 1; i < cands.size(); ++i) {
    const auto& a = cands[i - 1];
    const auto& b = cands[i];
    const bool ordered =
        a.pmi > b.pmi ||
        (a.pmi == b.pmi && (a.corpus_frequency > b.corpus_frequency ||
                            (a.corpus_frequency == b.corpus_frequency && a.word < b.word)));
    CHECK(ordered);
  }
  CHECK(extract_candidates(c, LabelAxis::kHate, "HS", {2, 10, 0.0}).size() == 2);
  CHECK(extract_candidates(c, LabelAxis::kHate, "HS", {40, 10, 0.0})[0].word ==
        extract_candidates(c, LabelAxis::kHate, "HS", {40, 10, 0.0})[0].word);
  CHECK_THROWS_AS(extract_candidates(c, LabelAxis::kHate, "HS", {0, 10, 0.0}), InvalidArgument);
}

TEST_CASE("apply_curation") {
  std::vector<CandidateWord> cands{{"a", 3, 10, 10}, {"b", 2, 10, 10}, {"c", 1, 10, 10}};
  CHECK(apply_curation(cands, {}, {}, 3) == std::vector<std::string>{"a", "b", "c"});
  CHECK(apply_curation(cands, {"a"}, {}, 2) == std::vector<std::string>{"b", "c"});
  CHECK(apply_curation(cands, {"b"}, {"z", "a"}, 3) == std::vector<std::string>{"a", "c", "z"});
  CHECK(apply_curation(cands, {}, {}, 1) == std::vector<std::string>{"a"});
  CHECK_THROWS_AS(apply_curation(cands, {"a", "b"}, {}, 2), Error);
  CHECK_THROWS_AS(apply_curation(cands, {}, {}, 0), InvalidArgument);
}

TEST_CASE("candidate CSV round trip") {
  std::vector<CandidateWord> cands{{"a,b", 1.25, 12, 40}, {"c", -0.5, 10, 11}};
  std::ostringstream out;
  write_candidates_csv(cands, out);
  CHECK(out.str().rfind("word,pmi_bits,doc_freq,corpus_freq\n", 0) == 0);
  std::istringstream in(out.str());
  const auto back = read_candidates_csv(in);
  REQUIRE(back.size() == 2);
  CHECK(back[0].word == "a,b");
  CHECK(back[0].pmi == 1.25);
  CHECK(back[1].corpus_frequency == 11);
}
