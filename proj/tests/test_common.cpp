#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "wordbias/common.hpp"
#include "wordbias/corpus.hpp"
#include "wordbias/csv.hpp"

using namespace wordbias;

TEST_CASE("number formatting round trips") {
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.1");
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal() * 1e5;
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK_THROWS_AS(parse_double("1.5x"), FormatError);
  CHECK_THROWS_AS(parse_double(""), FormatError);
  CHECK(parse_int("-12") == -12);
  CHECK_THROWS_AS(parse_int("3.0"), FormatError);
}

TEST_CASE("string helpers") {
  CHECK(to_lower("HeLLo \xC3\x89") == "hello \xC3\x89");
  CHECK(split_spaces("a b") == std::vector<std::string>{"a", "b"});
  CHECK(split_spaces("a  b") == std::vector<std::string>{"a", "", "b"});
}

TEST_CASE("Rng is deterministic and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng r(3);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 5000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    ++counts[r.below(5)];
  }
  for (int c : counts) CHECK(c > 850);
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
}

TEST_CASE("csv quoting round trip") {
  std::ostringstream out;
  write_csv_row(out, {"plain", "with,comma", "with \"quote\"", ""});
  write_csv_row(out, {"line\nbreak", "x"});
  CHECK(out.str().substr(0, out.str().find('\n')) ==
        "plain,\"with,comma\",\"with \"\"quote\"\"\",");
  std::istringstream in(out.str());
  const auto rows = read_csv(in);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"plain", "with,comma", "with \"quote\"", ""});
  CHECK(rows[1] == std::vector<std::string>{"line\nbreak", "x"});
}

TEST_CASE("atomic file write") {
  const auto path = (std::filesystem::temp_directory_path() / "wordbias_atomic.txt").string();
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  CHECK(read_file(path) == "second");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_file(path), Error);
}

TEST_CASE("labeled corpus JSON lines") {
  std::istringstream in(
      "{\"tokens\": [\"Hello\", \"world\"], \"hate\": \"NON_HS\", \"group\": \"male\"}\n"
      "\n"
      "{\"tokens\": [\"bad\"], \"hate\": \"HS\", \"group\": \"female\"}\n");
  const auto corpus = load_corpus(in);
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].tokens == std::vector<std::string>{"hello", "world"});
  CHECK(corpus[0].hate == HateLabel::kNonHate);
  CHECK(corpus[1].hate == HateLabel::kHate);
  CHECK(corpus[1].group == "female");

  std::ostringstream out;
  save_corpus(corpus, out);
  std::istringstream back(out.str());
  const auto again = load_corpus(back);
  CHECK(again.size() == 2);
  CHECK(again[1].tokens == corpus[1].tokens);

  std::istringstream bad_label("{\"tokens\": [\"a\"], \"hate\": \"maybe\", \"group\": \"g\"}\n");
  CHECK_THROWS_AS(load_corpus(bad_label), Error);
  std::istringstream empty_tokens("{\"tokens\": [], \"hate\": \"HS\", \"group\": \"g\"}\n");
  CHECK_THROWS_AS(load_corpus(empty_tokens), Error);
  std::istringstream not_json("{tokens\n");
  CHECK_THROWS_AS(load_corpus(not_json), Error);
}

TEST_CASE("sentence corpus") {
  std::istringstream in("a b c\n\nd\n");
  const auto s = load_sentences(in);
  std::ostringstream out;
  save_sentences(s, out);
  std::istringstream again(out.str());
  CHECK(load_sentences(again) == s);
  CHECK(s.front() == std::vector<std::string>{"a", "b", "c"});
}
