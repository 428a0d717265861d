#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "wordbias/common.hpp"
#include "wordbias/csv.hpp"
#include "wordbias/synthetic.hpp"

namespace fs = std::filesystem;
using namespace wordbias;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run_cli(const std::string& args, const fs::path& dir) {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = std::string(WORDBIAS_CLI_PATH) + " " + args + " > " + out.string() +
                          " 2> " + err.string();
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, read_file(out.string()), read_file(err.string())};
}

struct Workspace {
  fs::path dir;

  Workspace() : dir(fs::temp_directory_path() / "wordbias_cli_test") {
    fs::remove_all(dir);
    fs::create_directories(dir);
    SyntheticSpec spec;
    spec.bias_strength = 0.7;
    spec.seed = 1;
    const auto [e, q] = make_biased_embedding(spec);
    std::ofstream(dir / "e.vec") << [&] {
      std::ostringstream s;
      save_embedding(e, s);
      return s.str();
    }();
    write_file_atomic((dir / "w.json").string(), wordsets_to_json(q));
    std::ostringstream c;
    save_corpus(make_biased_corpus(spec, 60), c);
    write_file_atomic((dir / "c.jsonl").string(), c.str());
  }
  ~Workspace() { fs::remove_all(dir); }

  std::string p(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("cli: usage errors exit 1") {
  Workspace ws;
  auto r = run_cli("weat --embedding " + ws.p("e.vec") + " --wordsets " + ws.p("w.json") +
                       " --bogus",
                   ws.dir);
  CHECK(r.status == 1);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(run_cli("frobnicate", ws.dir).status == 1);
  CHECK(run_cli("", ws.dir).status == 1);
  CHECK(run_cli("weat --embedding " + ws.p("missing.vec") + " --wordsets " + ws.p("w.json"),
                ws.dir)
            .status == 1);
  write_file_atomic(ws.p("bad.json"), R"({"seed": 1})");
  CHECK(run_cli("pipeline --config " + ws.p("bad.json"), ws.dir).status == 1);
}

TEST_CASE("cli: runtime errors exit 2") {
  Workspace ws;
  write_file_atomic(ws.p("broken.vec"), "3 2\na 1 0\n");
  auto r = run_cli("weat --embedding " + ws.p("broken.vec") + " --wordsets " + ws.p("w.json"),
                   ws.dir);
  CHECK(r.status == 2);
  CHECK(r.err.rfind("error:", 0) == 0);
  CHECK(r.out.empty());
}

TEST_CASE("cli: weat and rnsb print JSON") {
  Workspace ws;
  auto r = run_cli("weat --embedding " + ws.p("e.vec") + " --wordsets " + ws.p("w.json"), ws.dir);
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.contains("statistic"));
  CHECK(j["effect_size"].get<double>() > 0.5);

  r = run_cli("rnsb --seeds 2 --embedding " + ws.p("e.vec") + " --wordsets " + ws.p("w.json"),
              ws.dir);
  REQUIRE(r.status == 0);
  const auto k = nlohmann::json::parse(r.out);
  CHECK(k["kl_bits"].get<double>() >= 0.0);
  CHECK(k["per_set_negative_probability"].size() == 2);
}

TEST_CASE("cli: extraction, modification and scoring subcommands") {
  Workspace ws;
  auto r = run_cli("extract-words --corpus " + ws.p("c.jsonl") + " --label HS --top-n 5", ws.dir);
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("word,pmi_bits,doc_freq,corpus_freq\nhsmarker,", 0) == 0);

  write_file_atomic(ws.p("ex.txt"), "hsmarker\n");
  r = run_cli("extract-words --corpus " + ws.p("c.jsonl") + " --label HS --final-n 2 --exclude " +
                  ws.p("ex.txt"),
              ws.dir);
  REQUIRE(r.status == 0);
  CHECK(r.out.find("hsmarker") == std::string::npos);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 2);

  r = run_cli("expand-wordset --k 1 --wordsets " + ws.p("w.json") + " --aux " + ws.p("e.vec") +
                  " --output " + ws.p("expanded.json"),
              ws.dir);
  REQUIRE(r.status == 0);
  CHECK(load_wordsets_file(ws.p("expanded.json")).t1.size() >= 8);

  write_file_atomic(ws.p("s.txt"), "t1w000 a1w000\nt2w000 a1w000\nfill000\n");
  r = run_cli("balance --p 0 --seed 1 --sentences " + ws.p("s.txt") + " --wordsets " +
                  ws.p("w.json"),
              ws.dir);
  REQUIRE(r.status == 0);
  CHECK(r.out == "t2w000 a1w000\nfill000\n");

  r = run_cli("attract-repel --seed 0 --epochs 3 --embedding " + ws.p("e.vec") + " --wordsets " +
                  ws.p("w.json") + " --output " + ws.p("ar.vec"),
              ws.dir);
  REQUIRE(r.status == 0);
  const auto ar = load_embedding_file(ws.p("ar.vec"));
  CHECK(ar.size() == load_embedding_file(ws.p("e.vec")).size());

  r = run_cli("score-extrinsic --embedding " + ws.p("e.vec") + " --corpus " + ws.p("c.jsonl") +
                  " --test-corpus " + ws.p("c.jsonl") + " --predictions-out " + ws.p("pred.csv") +
                  " --group-a g1 --group-b g2 --measure recall",
              ws.dir);
  REQUIRE(r.status == 0);
  const auto direct = nlohmann::json::parse(r.out);
  r = run_cli("score-extrinsic --predictions " + ws.p("pred.csv") +
                  " --group-a g1 --group-b g2 --measure recall",
              ws.dir);
  REQUIRE(r.status == 0);
  CHECK(nlohmann::json::parse(r.out)["bias_score"] == direct["bias_score"]);
  CHECK(run_cli("score-extrinsic --group-a g1", ws.dir).status == 1);
  CHECK(run_cli("score-extrinsic --predictions " + ws.p("pred.csv") + " --group-a g1 --group-b zz",
                ws.dir)
            .status == 2);
}

TEST_CASE("cli: correlate and scatter") {
  Workspace ws;
  write_file_atomic(ws.p("t.csv"),
                    "variant_id,a,b,c\nv1,1,2,5\nv2,2,4,\nv3,3,5,1\nv4,4,9,2\nv5,5,10,0\n");
  auto r = run_cli("correlate --seed 1 --table " + ws.p("t.csv") + " --intrinsic a --extrinsic b,c",
                   ws.dir);
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("intrinsic,extrinsic,rho,p_value,n\na,b,1,", 0) == 0);
  const auto again = run_cli(
      "correlate --seed 1 --table " + ws.p("t.csv") + " --intrinsic a --extrinsic b,c", ws.dir);
  CHECK(again.out == r.out);

  r = run_cli("scatter --table " + ws.p("t.csv") + " --x a --y c", ws.dir);
  REQUIRE(r.status == 0);
  CHECK(r.out == "variant_id,x,y\nv1,1,5\nv3,3,1\nv4,4,2\nv5,5,0\n");
  CHECK(run_cli("scatter --table " + ws.p("t.csv") + " --x a --y zz", ws.dir).status == 2);
}

TEST_CASE("cli: synth and pipeline are reproducible") {
  Workspace ws;
  auto r = run_cli("synth --seed 3 --beta 0.2 --output-embedding " + ws.p("s1.vec") +
                       " --output-wordsets " + ws.p("s1.json") + " --output-corpus " +
                       ws.p("s1.jsonl"),
                   ws.dir);
  REQUIRE(r.status == 0);
  run_cli("synth --seed 3 --beta 0.2 --output-embedding " + ws.p("s2.vec"), ws.dir);
  CHECK(read_file(ws.p("s1.vec")) == read_file(ws.p("s2.vec")));
  CHECK(load_corpus_file(ws.p("s1.jsonl")).size() == 1000);

  nlohmann::json cfg;
  cfg["seed"] = 2;
  cfg["output_dir"] = ws.p("run");
  cfg["resamples"] = 99;
  cfg["rnsb_seeds"] = 1;
  cfg["synthetic"] = {{"betas", {0.0, 0.5, 1.0}}, {"docs_per_group", 20}, {"test_docs_per_group", 20}};
  write_file_atomic(ws.p("c.json"), cfg.dump());
  r = run_cli("pipeline --config " + ws.p("c.json"), ws.dir);
  REQUIRE(r.status == 0);
  CHECK(fs::exists(ws.dir / "run" / "run_table.csv"));
  CHECK(fs::exists(ws.dir / "run" / "correlation_grid.csv"));
  CHECK(fs::exists(ws.dir / "run" / "scatter" / "rnsb_signed__bias_f1.csv"));
  const auto first = read_file(ws.p("run/run_table.csv"));
  REQUIRE(run_cli("pipeline --config " + ws.p("c.json"), ws.dir).status == 0);
  CHECK(read_file(ws.p("run/run_table.csv")) == first);
}
