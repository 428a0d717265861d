// Command-line front end for the wordbias toolkit.
//
// Exit status: 0 success, 1 invalid usage or configuration, 2 runtime failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wordbias/correlation.hpp"
#include "wordbias/csv.hpp"
#include "wordbias/extraction.hpp"
#include "wordbias/extrinsic.hpp"
#include "wordbias/intrinsic.hpp"
#include "wordbias/modification.hpp"
#include "wordbias/pipeline.hpp"
#include "wordbias/synthetic.hpp"

namespace {

using namespace wordbias;
using ojson = nlohmann::ordered_json;

// Problems with the invocation itself rather than with the data.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes to the file when a path is given, otherwise to stdout.
void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
  } else {
    write_file_atomic(path, content);
  }
}

std::string json_number(double v) { return format_double(v); }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::string> read_word_list(const std::string& path) {
  std::vector<std::string> out;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(to_lower(line));
  }
  return out;
}

struct WeatArgs {
  std::string embedding, wordsets, output;
  bool prune = false;
  std::uint64_t seed = 0;
};

int run_weat(const WeatArgs& a) {
  const auto e = load_embedding_file(a.embedding);
  auto quad = load_wordsets_file(a.wordsets);
  quad.validate();
  if (a.prune) quad = prune_weat_targets(quad, e, a.seed);
  const auto r = weat(e, quad);
  ojson j;
  j["statistic"] = r.statistic;
  j["effect_size"] = r.effect_size;
  j["t1"] = quad.t1;
  j["t2"] = quad.t2;
  emit(a.output, j.dump(2) + "\n");
  return 0;
}

struct RnsbArgs {
  std::string embedding, wordsets, output;
  std::size_t seeds = 10;
  double reg = 1.0;
  bool prune = false;
  std::uint64_t prune_seed = 0;
};

int run_rnsb(const RnsbArgs& a) {
  const auto e = load_embedding_file(a.embedding);
  auto quad = load_wordsets_file(a.wordsets);
  quad.validate();
  if (a.prune) quad = prune_weat_targets(quad, e, a.prune_seed);
  RnsbOptions opt;
  opt.regularization = a.reg;
  opt.seeds.clear();
  for (std::size_t s = 0; s < a.seeds; ++s) opt.seeds.push_back(s);
  const auto r = rnsb(e, {quad.t1, quad.t2}, quad.a1, quad.a2, opt);
  ojson j;
  j["kl_bits"] = r.kl_value;
  j["signed"] = *r.signed_value;
  j["per_set_negative_probability"] = r.per_set_negative_probability;
  j["seeds"] = a.seeds;
  emit(a.output, j.dump(2) + "\n");
  return 0;
}

struct ExtractArgs {
  std::string corpus, axis = "hate", label, output;
  std::size_t top_n = 40, min_docs = 10, final_n = 0;
  double alpha = 0.0;
  std::string exclude, include;
};

int run_extract(const ExtractArgs& a) {
  const auto corpus = load_corpus_file(a.corpus);
  ExtractionOptions opt{a.top_n, a.min_docs, a.alpha};
  const auto candidates = extract_candidates(corpus, parse_axis(a.axis), a.label, opt);
  if (a.final_n == 0) {
    std::ostringstream ss;
    write_candidates_csv(candidates, ss);
    emit(a.output, ss.str());
    return 0;
  }
  std::unordered_set<std::string> exclude;
  if (!a.exclude.empty()) {
    for (auto& w : read_word_list(a.exclude)) exclude.insert(w);
  }
  std::vector<std::string> include;
  if (!a.include.empty()) include = read_word_list(a.include);
  const auto words = apply_curation(candidates, exclude, include, a.final_n);
  std::string out;
  for (const auto& w : words) out += w + "\n";
  emit(a.output, out);
  return 0;
}

struct ExpandArgs {
  std::string wordsets, aux, output;
  std::size_t k = 10;
};

int run_expand(const ExpandArgs& a) {
  const auto aux = load_embedding_file(a.aux);
  const auto quad = load_wordsets_file(a.wordsets);
  quad.validate();
  const auto r = expand_word_sets(quad, aux, a.k);
  for (const auto& w : r.skipped) {
    std::cerr << "warning: \"" << w << "\" is not in the auxiliary vocabulary; not expanded\n";
  }
  emit(a.output, wordsets_to_json(r.quad));
  return 0;
}

struct BalanceArgs {
  std::string sentences, wordsets, mode = "debias", output;
  double p = 0.0;
  std::uint64_t seed = 0;
};

int run_balance(const BalanceArgs& a) {
  std::istringstream in(read_file(a.sentences));
  const auto sentences = load_sentences(in);
  const auto quad = load_wordsets_file(a.wordsets);
  quad.validate();
  const auto kept = balance_corpus(sentences, quad, {parse_bias_mode(a.mode), a.p, a.seed});
  std::ostringstream ss;
  save_sentences(kept, ss);
  emit(a.output, ss.str());
  std::cerr << "kept " << kept.size() << " of " << sentences.size() << " sentences\n";
  return 0;
}

struct AttractRepelArgs {
  std::string embedding, wordsets, mode = "debias", output;
  AttractRepelConfig cfg;
};

int run_attract_repel(const AttractRepelArgs& a) {
  const auto e = load_embedding_file(a.embedding);
  const auto quad = load_wordsets_file(a.wordsets);
  quad.validate();
  const auto pairs = build_pairs(quad, parse_bias_mode(a.mode));
  const auto r = attract_repel(e, pairs.synonyms, pairs.antonyms, a.cfg);
  if (r.identity) std::cerr << "warning: no pairs; output is the normalized input\n";
  std::ostringstream ss;
  save_embedding(r.embedding, ss);
  emit(a.output, ss.str());
  return 0;
}

struct ScoreArgs {
  std::string predictions, embedding, corpus, test_corpus, predictions_out, output;
  std::string group_a, group_b, measure = "f1";
  int positive = 1;
  double reg = 1.0;
  std::uint64_t seed = 0;
};

int run_score(const ScoreArgs& a) {
  std::vector<PredictionRecord> records;
  if (!a.predictions.empty()) {
    if (!a.embedding.empty() || !a.corpus.empty()) {
      throw UsageError("score-extrinsic: give either --predictions or --embedding/--corpus/--test-corpus");
    }
    std::istringstream in(read_file(a.predictions));
    records = read_predictions_csv(in);
  } else {
    if (a.embedding.empty() || a.corpus.empty() || a.test_corpus.empty()) {
      throw UsageError(
          "score-extrinsic: --predictions, or all of --embedding, --corpus and --test-corpus, "
          "are required");
    }
    const auto e = load_embedding_file(a.embedding);
    const auto clf = train_standin_classifier(load_corpus_file(a.corpus), e, a.reg, a.seed);
    records = predict_records(clf, load_corpus_file(a.test_corpus), e);
    if (!a.predictions_out.empty()) {
      std::ostringstream ss;
      write_predictions_csv(records, ss);
      write_file_atomic(a.predictions_out, ss.str());
    }
  }
  const auto scores = grouped_prf(records, a.positive);
  ojson j;
  ojson groups = ojson::object();
  for (const auto& [g, s] : scores) {
    groups[g] = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
                 {"support", s.support}};
  }
  j["groups"] = groups;
  if (!a.group_a.empty() || !a.group_b.empty()) {
    if (a.group_a.empty() || a.group_b.empty()) {
      throw UsageError("score-extrinsic: --group-a and --group-b go together");
    }
    j["measure"] = a.measure;
    j["bias_score"] = bias_score(records, a.group_a, a.group_b, parse_measure(a.measure), a.positive);
  }
  emit(a.output, j.dump(2) + "\n");
  return 0;
}

struct CorrelateArgs {
  std::string table, intrinsic, extrinsic, output;
  std::size_t resamples = kDefaultResamples;
  std::uint64_t seed = 0;
};

int run_correlate(const CorrelateArgs& a) {
  std::istringstream in(read_file(a.table));
  const auto table = read_run_table(in);
  const auto cells =
      correlate_table(table, split_list(a.intrinsic), split_list(a.extrinsic), a.resamples, a.seed);
  for (const auto& c : cells) {
    if (!c.valid) {
      std::cerr << "warning: " << c.intrinsic << " x " << c.extrinsic << ": " << c.note << "\n";
    }
  }
  std::ostringstream ss;
  write_correlation_grid(cells, ss);
  emit(a.output, ss.str());
  return 0;
}

struct ScatterArgs {
  std::string table, x, y, output;
};

int run_scatter(const ScatterArgs& a) {
  std::istringstream in(read_file(a.table));
  const auto table = read_run_table(in);
  std::ostringstream ss;
  write_scatter_csv(emit_scatter(table, a.x, a.y), ss);
  emit(a.output, ss.str());
  return 0;
}

struct SynthArgs {
  SyntheticSpec spec;
  std::string embedding_out, wordsets_out, corpus_out;
  std::size_t docs_per_group = 500;
};

int run_synth(const SynthArgs& a) {
  const auto [e, quad] = make_biased_embedding(a.spec);
  std::ostringstream ss;
  save_embedding(e, ss);
  emit(a.embedding_out, ss.str());
  if (!a.wordsets_out.empty()) write_file_atomic(a.wordsets_out, wordsets_to_json(quad));
  if (!a.corpus_out.empty()) {
    std::ostringstream cs;
    save_corpus(make_biased_corpus(a.spec, a.docs_per_group), cs);
    write_file_atomic(a.corpus_out, cs.str());
  }
  return 0;
}

int run_pipeline_cmd(const std::string& config_path) {
  PipelineConfig cfg;
  try {
    cfg = parse_pipeline_config(read_file(config_path));
    cfg.validate();
  } catch (const Error& ex) {
    throw UsageError(ex.what());
  }
  const auto r = run_pipeline(cfg);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  std::cerr << "wrote " << r.table.rows().size() << " run-table rows and " << r.cells.size()
            << " correlation cells to " << cfg.output_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intrinsic/extrinsic word-embedding bias toolkit"};
  app.require_subcommand(1);

  WeatArgs weat_args;
  auto* weat_cmd = app.add_subcommand("weat", "WEAT statistic and effect size");
  weat_cmd->add_option("--embedding", weat_args.embedding, "word2vec text file")
      ->required()->check(CLI::ExistingFile);
  weat_cmd->add_option("--wordsets", weat_args.wordsets, "word set JSON")
      ->required()->check(CLI::ExistingFile);
  weat_cmd->add_flag("--prune", weat_args.prune, "drop OOV targets and equalize set sizes");
  weat_cmd->add_option("--seed", weat_args.seed, "seed for pruning");
  weat_cmd->add_option("--output", weat_args.output, "output file (default stdout)");

  RnsbArgs rnsb_args;
  auto* rnsb_cmd = app.add_subcommand("rnsb", "KL and signed RNSB");
  rnsb_cmd->add_option("--embedding", rnsb_args.embedding)->required()->check(CLI::ExistingFile);
  rnsb_cmd->add_option("--wordsets", rnsb_args.wordsets)->required()->check(CLI::ExistingFile);
  rnsb_cmd->add_option("--seeds", rnsb_args.seeds, "number of training seeds (0..n-1)")
      ->check(CLI::PositiveNumber);
  rnsb_cmd->add_option("--reg", rnsb_args.reg, "L2 strength")->check(CLI::PositiveNumber);
  rnsb_cmd->add_flag("--prune", rnsb_args.prune);
  rnsb_cmd->add_option("--prune-seed", rnsb_args.prune_seed);
  rnsb_cmd->add_option("--output", rnsb_args.output);

  ExtractArgs ex_args;
  auto* ex_cmd = app.add_subcommand("extract-words", "PMI candidate words from a labeled corpus");
  ex_cmd->add_option("--corpus", ex_args.corpus, "JSON Lines corpus")
      ->required()->check(CLI::ExistingFile);
  ex_cmd->add_option("--axis", ex_args.axis)->check(CLI::IsMember({"hate", "group"}));
  ex_cmd->add_option("--label", ex_args.label, "HS, NON_HS or a group label")->required();
  ex_cmd->add_option("--top-n", ex_args.top_n)->check(CLI::PositiveNumber);
  ex_cmd->add_option("--min-docs", ex_args.min_docs);
  ex_cmd->add_option("--alpha", ex_args.alpha)->check(CLI::NonNegativeNumber);
  ex_cmd->add_option("--exclude", ex_args.exclude, "file with words to drop, one per line")
      ->check(CLI::ExistingFile);
  ex_cmd->add_option("--include", ex_args.include, "file with words to append, one per line")
      ->check(CLI::ExistingFile);
  ex_cmd->add_option("--final-n", ex_args.final_n, "emit a curated list of this many words");
  ex_cmd->add_option("--output", ex_args.output);

  ExpandArgs exp_args;
  auto* exp_cmd = app.add_subcommand("expand-wordset", "add nearest neighbours to word sets");
  exp_cmd->add_option("--wordsets", exp_args.wordsets)->required()->check(CLI::ExistingFile);
  exp_cmd->add_option("--aux", exp_args.aux, "auxiliary embedding")
      ->required()->check(CLI::ExistingFile);
  exp_cmd->add_option("--k", exp_args.k)->check(CLI::PositiveNumber);
  exp_cmd->add_option("--output", exp_args.output);

  BalanceArgs bal_args;
  auto* bal_cmd = app.add_subcommand("balance", "down-sample (anti-)stereotypical sentences");
  bal_cmd->add_option("--sentences", bal_args.sentences, "one sentence per line")
      ->required()->check(CLI::ExistingFile);
  bal_cmd->add_option("--wordsets", bal_args.wordsets)->required()->check(CLI::ExistingFile);
  bal_cmd->add_option("--mode", bal_args.mode)->check(CLI::IsMember({"debias", "overbias"}));
  bal_cmd->add_option("--p", bal_args.p, "keep probability in [0, 1)")->required();
  bal_cmd->add_option("--seed", bal_args.seed)->required();
  bal_cmd->add_option("--output", bal_args.output);

  AttractRepelArgs ar_args;
  auto* ar_cmd = app.add_subcommand("attract-repel", "specialize an embedding with bias pairs");
  ar_cmd->add_option("--embedding", ar_args.embedding)->required()->check(CLI::ExistingFile);
  ar_cmd->add_option("--wordsets", ar_args.wordsets)->required()->check(CLI::ExistingFile);
  ar_cmd->add_option("--mode", ar_args.mode)->check(CLI::IsMember({"debias", "overbias"}));
  ar_cmd->add_option("--delta-sim", ar_args.cfg.synonym_margin);
  ar_cmd->add_option("--delta-ant", ar_args.cfg.antonym_margin);
  ar_cmd->add_option("--lambda", ar_args.cfg.regularization);
  ar_cmd->add_option("--batch-syn", ar_args.cfg.synonym_batch);
  ar_cmd->add_option("--batch-ant", ar_args.cfg.antonym_batch);
  ar_cmd->add_option("--epochs", ar_args.cfg.epochs);
  ar_cmd->add_option("--learning-rate", ar_args.cfg.learning_rate);
  ar_cmd->add_option("--seed", ar_args.cfg.seed)->required();
  ar_cmd->add_option("--output", ar_args.output);

  ScoreArgs sc_args;
  auto* sc_cmd = app.add_subcommand("score-extrinsic", "grouped P/R/F1 and bias score");
  sc_cmd->add_option("--predictions", sc_args.predictions, "CSV gold,pred,group")
      ->check(CLI::ExistingFile);
  sc_cmd->add_option("--embedding", sc_args.embedding, "train the stand-in classifier")
      ->check(CLI::ExistingFile);
  sc_cmd->add_option("--corpus", sc_args.corpus, "training corpus")->check(CLI::ExistingFile);
  sc_cmd->add_option("--test-corpus", sc_args.test_corpus)->check(CLI::ExistingFile);
  sc_cmd->add_option("--predictions-out", sc_args.predictions_out);
  sc_cmd->add_option("--group-a", sc_args.group_a);
  sc_cmd->add_option("--group-b", sc_args.group_b);
  sc_cmd->add_option("--measure", sc_args.measure)
      ->check(CLI::IsMember({"precision", "recall", "f1"}));
  sc_cmd->add_option("--positive", sc_args.positive)->check(CLI::IsMember({0, 1}));
  sc_cmd->add_option("--reg", sc_args.reg)->check(CLI::PositiveNumber);
  sc_cmd->add_option("--seed", sc_args.seed);
  sc_cmd->add_option("--output", sc_args.output);

  CorrelateArgs co_args;
  auto* co_cmd = app.add_subcommand("correlate", "Spearman grid with permutation p-values");
  co_cmd->add_option("--table", co_args.table, "run table CSV")
      ->required()->check(CLI::ExistingFile);
  co_cmd->add_option("--intrinsic", co_args.intrinsic, "comma-separated columns")->required();
  co_cmd->add_option("--extrinsic", co_args.extrinsic, "comma-separated columns")->required();
  co_cmd->add_option("--resamples", co_args.resamples)->check(CLI::PositiveNumber);
  co_cmd->add_option("--seed", co_args.seed)->required();
  co_cmd->add_option("--output", co_args.output);

  ScatterArgs scat_args;
  auto* scat_cmd = app.add_subcommand("scatter", "scatter data for two run-table columns");
  scat_cmd->add_option("--table", scat_args.table)->required()->check(CLI::ExistingFile);
  scat_cmd->add_option("--x", scat_args.x)->required();
  scat_cmd->add_option("--y", scat_args.y)->required();
  scat_cmd->add_option("--output", scat_args.output);

  SynthArgs syn_args;
  auto* syn_cmd = app.add_subcommand("synth", "synthetic embedding/corpus with planted bias");
  syn_cmd->add_option("--beta", syn_args.spec.bias_strength)->check(CLI::Range(0.0, 1.0));
  syn_cmd->add_option("--dim", syn_args.spec.dim);
  syn_cmd->add_option("--noise", syn_args.spec.noise_scale)->check(CLI::NonNegativeNumber);
  syn_cmd->add_option("--set-size", [&](const std::vector<std::string>& v) {
    const auto n = static_cast<std::size_t>(std::stoul(v.at(0)));
    syn_args.spec.t1_size = syn_args.spec.t2_size = syn_args.spec.a1_size =
        syn_args.spec.a2_size = n;
    return true;
  }, "size of each of the four word sets");
  syn_cmd->add_option("--fillers", syn_args.spec.filler_size);
  syn_cmd->add_option("--seed", syn_args.spec.seed)->required();
  syn_cmd->add_option("--docs-per-group", syn_args.docs_per_group);
  syn_cmd->add_option("--output-embedding", syn_args.embedding_out);
  syn_cmd->add_option("--output-wordsets", syn_args.wordsets_out);
  syn_cmd->add_option("--output-corpus", syn_args.corpus_out);

  std::string config_path;
  auto* pipe_cmd = app.add_subcommand("pipeline", "run the full correlation study");
  pipe_cmd->add_option("--config", config_path, "pipeline JSON")
      ->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*weat_cmd) return run_weat(weat_args);
    if (*rnsb_cmd) return run_rnsb(rnsb_args);
    if (*ex_cmd) return run_extract(ex_args);
    if (*exp_cmd) return run_expand(exp_args);
    if (*bal_cmd) return run_balance(bal_args);
    if (*ar_cmd) return run_attract_repel(ar_args);
    if (*sc_cmd) return run_score(sc_args);
    if (*co_cmd) return run_correlate(co_args);
    if (*scat_cmd) return run_scatter(scat_args);
    if (*syn_cmd) return run_synth(syn_args);
    if (*pipe_cmd) return run_pipeline_cmd(config_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
