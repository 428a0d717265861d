#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wordbias/common.hpp"
#include "wordbias/embedding.hpp"
#include "wordbias/wordsets.hpp"

using namespace wordbias;

namespace {

Embedding parse(const std::string& text) {
  std::istringstream in(text);
  return load_embedding(in);
}

Embedding random_embedding(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> words;
  std::vector<double> data(n * dim);
  for (std::size_t i = 0; i < n; ++i) words.push_back("w" + std::to_string(i));
  for (auto& v : data) v = rng.normal() * std::pow(10.0, static_cast<double>(rng.below(7)) - 3);
  return Embedding(words, data, dim);
}

}  // namespace

TEST_CASE("load_embedding reads the text format") {
  const auto e = parse("2 3\na 1 0 0\nb 0 1 0\n");
  CHECK(e.size() == 2);
  CHECK(e.dim() == 3);
  CHECK(e.words() == std::vector<std::string>{"a", "b"});
  CHECK(e.row(1)[1] == 1.0);
}

TEST_CASE("load_embedding rejects malformed input") {
  CHECK_THROWS_AS(parse("2 3\na 1 0\nb 0 1 0\n"), FormatError);
  CHECK_THROWS_AS(parse("two 3\na 1 0 0\n"), FormatError);
  CHECK_THROWS_AS(parse("2 3\na 1 0 0\na 0 1 0\n"), Error);
  CHECK_THROWS_AS(parse("1 2\na nan 0\n"), Error);
  CHECK_THROWS_AS(parse("1 2\na inf 0\n"), Error);
  CHECK_THROWS_AS(parse("2 2\na 1 0\n"), FormatError);
  CHECK_THROWS_AS(parse("1 2\na 1 0\nb 0 1\n"), FormatError);
  CHECK_THROWS_AS(parse(""), FormatError);
}

TEST_CASE("save_embedding output") {
  std::ostringstream out;
  save_embedding(Embedding({"a"}, {1.0, 0.0}, 2), out);
  CHECK(out.str() == "1 2\na 1 0\n");

  std::ostringstream empty;
  save_embedding(Embedding({}, {}, 4), empty);
  CHECK(empty.str() == "0 4\n");
}

TEST_CASE("save/load round trip is bit exact on a random 50x10 embedding") {
  const auto e = random_embedding(50, 10, 5);
  std::ostringstream out;
  save_embedding(e, out);
  const auto back = parse(out.str());
  CHECK(back == e);
  for (std::size_t i = 0; i < e.data().size(); ++i) {
    REQUIRE(std::bit_cast<std::uint64_t>(back.data()[i]) ==
            std::bit_cast<std::uint64_t>(e.data()[i]));
  }
}

TEST_CASE("vector_of averages multi-word expressions") {
  const Embedding e({"a", "b"}, {1, 0, 0, 1}, 2);
  CHECK(e.vector_of("a") == std::vector<double>{1, 0});
  CHECK(e.vector_of("a b") == std::vector<double>{0.5, 0.5});
  CHECK(e.vector_of("A") == std::vector<double>{1, 0});
  try {
    e.vector_of("a c");
    FAIL("expected OovError");
  } catch (const OovError& err) {
    CHECK(err.token() == "c");
  }
  CHECK(e.resolves("a b"));
  CHECK_FALSE(e.resolves("a c"));
}

TEST_CASE("cosine values") {
  const Embedding e({"x", "y", "d", "z"}, {1, 0, 0, 1, 1, 1, 0, 0}, 2);
  CHECK(cosine(e, "x", "x") == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cosine(e, "x", "y") == 0.0);
  CHECK(std::fabs(cosine(e, "d", "x") - 1.0 / std::sqrt(2.0)) < 1e-9);
  CHECK_THROWS_AS(cosine(e, "x", "z"), DegenerateInputError);
  CHECK_THROWS_AS(cosine(e, "x", "nope"), OovError);
}

TEST_CASE("cosine is symmetric and scale invariant") {
  auto e = random_embedding(20, 6, 9);
  auto scaled = e.data();
  for (std::size_t j = 0; j < e.dim(); ++j) scaled[3 * e.dim() + j] *= 7.5;
  const auto s = e.with_data(scaled);
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = 0; j < e.size(); ++j) {
      CHECK(std::fabs(cosine(e.row(i), e.row(j)) - cosine(e.row(j), e.row(i))) < 1e-12);
    }
    CHECK(std::fabs(cosine(e.row(i), e.row(3)) - cosine(s.row(i), s.row(3))) < 1e-12);
  }
}

TEST_CASE("nearest_neighbors on small vocabularies") {
  const Embedding e({"a", "b", "c"}, {1, 0, 0, 0.8, 0.6, 0, 0, 0, 1}, 3);
  auto nn = nearest_neighbors(e, "a", 1);
  REQUIRE(nn.size() == 1);
  CHECK(nn[0].word == "b");
  CHECK(nearest_neighbors(e, "a", 5, {"a", "b", "c"}).empty());
  CHECK_THROWS_AS(nearest_neighbors(e, "q", 1), OovError);
}

TEST_CASE("nearest_neighbors ties keep vocabulary order") {
  const Embedding e({"q", "z", "y", "x"}, {1, 0, 0, 1, 0, 1, 0, 1}, 2);
  const auto nn = nearest_neighbors(e, "q", 3);
  REQUIRE(nn.size() == 3);
  CHECK(nn[0].word == "z");
  CHECK(nn[1].word == "y");
  CHECK(nn[2].word == "x");
}

TEST_CASE("nearest_neighbors matches a full-sort oracle") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto e = random_embedding(100, 10, seed);
    const std::unordered_set<std::string> exclude{"w3", "w17", "w50"};
    const std::size_t k = 12;
    const auto nn = nearest_neighbors(e, "w0", k, exclude);

    std::vector<std::pair<double, std::size_t>> all;
    const auto& q = e.row(0);
    for (std::size_t i = 1; i < e.size(); ++i) {
      if (exclude.count(e.word(i))) continue;
      double d = 0, nq = 0, ni = 0;
      for (std::size_t j = 0; j < e.dim(); ++j) {
        d += q[j] * e.row(i)[j];
        nq += q[j] * q[j];
        ni += e.row(i)[j] * e.row(i)[j];
      }
      all.push_back({d / std::sqrt(nq * ni), i});
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    REQUIRE(nn.size() == k);
    for (std::size_t r = 0; r < k; ++r) {
      CHECK(nn[r].word == e.word(all[r].second));
      CHECK(std::fabs(nn[r].cosine - all[r].first) < 1e-12);
      if (r > 0) CHECK(nn[r - 1].cosine >= nn[r].cosine);
    }
  }
}

TEST_CASE("prune_weat_targets") {
  const Embedding e({"t1a", "t1b", "t1c", "t2a", "t2b", "t2c", "a1", "a2"},
                    std::vector<double>(16, 1.0), 2);
  WordSetQuad q{{"t1a", "t1b", "t1c"}, {"t2a", "t2b", "t2c"}, {"a1"}, {"a2"}};
  CHECK(prune_weat_targets(q, e, 1) == q);

  WordSetQuad missing = q;
  missing.t1.push_back("gone");
  missing.t2.push_back("t2a t2b");
  const auto p = prune_weat_targets(missing, e, 4);
  CHECK(p.t1 == q.t1);
  CHECK(p.t2.size() == 3);
  CHECK(p.a1 == q.a1);
  CHECK(p == prune_weat_targets(missing, e, 4));

  WordSetQuad drop_one = q;
  drop_one.t1[0] = "gone";
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = prune_weat_targets(drop_one, e, seed);
    CHECK(r.t1.size() == 2);
    CHECK(r.t2.size() == 2);
    CHECK(std::is_sorted(r.t2.begin(), r.t2.end()));
  }

  WordSetQuad bad_attr = q;
  bad_attr.a2.push_back("nope");
  CHECK_THROWS_AS(prune_weat_targets(bad_attr, e, 0), OovError);
  WordSetQuad emptied = q;
  emptied.t1 = {"x", "y"};
  CHECK_THROWS_AS(prune_weat_targets(emptied, e, 0), DegenerateInputError);
}

TEST_CASE("word set JSON parsing and validation") {
  const auto q = parse_wordsets_json(R"({"t1":["He"],"t2":["she"],"a1":["x y"],"a2":["z"]})");
  CHECK(q.t1 == std::vector<std::string>{"he"});
  CHECK(q.a1 == std::vector<std::string>{"x y"});
  CHECK(parse_wordsets_json(wordsets_to_json(q)) == q);
  CHECK_THROWS_AS(parse_wordsets_json(R"({"t1":["a"],"t2":["b"],"a1":["c"]})"), Error);
  CHECK_THROWS_AS(parse_wordsets_json("not json"), Error);
  WordSetQuad overlap{{"a"}, {"A"}, {"c"}, {"d"}};
  CHECK_THROWS_AS(overlap.validate(), InvalidArgument);
  WordSetQuad empty{{"a"}, {}, {"c"}, {"d"}};
  CHECK_THROWS_AS(empty.validate(), InvalidArgument);
}
