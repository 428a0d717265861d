#include "wordbias/pipeline.hpp"

#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wordbias/csv.hpp"
#include "wordbias/intrinsic.hpp"
#include "wordbias/modification.hpp"

namespace wordbias {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string extrinsic_column(const std::string& measure) { return "bias_" + measure; }

namespace {

const std::set<std::string> kIntrinsicNames{"weat_effect_size", "weat_statistic", "rnsb_kl",
                                            "rnsb_signed"};

template <typename T>
T get_field(const nlohmann::json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidArgument("config: \"" + where + key + "\" has the wrong type");
  }
}

void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!j.is_object()) throw InvalidArgument("config: \"" + where + "\" must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.contains(it.key())) {
      throw InvalidArgument("config: unknown key \"" + where + it.key() + "\"");
    }
  }
}

std::string fmt(double v) { return format_double(v); }

std::string beta_id(double beta) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "syn-b%.2f", beta);
  return buf;
}

struct Evaluator {
  const PipelineConfig& cfg;
  std::vector<std::string>& warnings;

  std::map<std::string, double> intrinsic(const Embedding& e, const WordSetQuad& quad,
                                          const std::string& suffix, const std::string& id) {
    std::map<std::string, double> out;
    const std::set<std::string> wanted(cfg.intrinsic_metrics.begin(), cfg.intrinsic_metrics.end());
    if (wanted.contains("weat_effect_size") || wanted.contains("weat_statistic")) {
      try {
        const auto w = weat(e, quad);
        if (wanted.contains("weat_effect_size")) out["weat_effect_size" + suffix] = w.effect_size;
        if (wanted.contains("weat_statistic")) out["weat_statistic" + suffix] = w.statistic;
      } catch (const DegenerateInputError& ex) {
        warnings.push_back(id + ": " + ex.what());
      }
    }
    if (wanted.contains("rnsb_kl") || wanted.contains("rnsb_signed")) {
      RnsbOptions opt;
      opt.regularization = cfg.rnsb_regularization;
      opt.seeds.clear();
      for (std::size_t s = 0; s < cfg.rnsb_seed_count; ++s) opt.seeds.push_back(s);
      const auto r = rnsb(e, {quad.t1, quad.t2}, quad.a1, quad.a2, opt);
      if (wanted.contains("rnsb_kl")) out["rnsb_kl" + suffix] = r.kl_value;
      if (wanted.contains("rnsb_signed")) out["rnsb_signed" + suffix] = *r.signed_value;
    }
    return out;
  }

  std::map<std::string, double> extrinsic(const Embedding& e, const LabeledCorpus& train,
                                          const LabeledCorpus& test, std::uint64_t seed) {
    const auto clf = train_standin_classifier(train, e, cfg.classifier_regularization, seed);
    const auto records = predict_records(clf, test, e);
    std::map<std::string, double> out;
    for (const auto& m : cfg.extrinsic_measures) {
      out[extrinsic_column(m)] =
          bias_score(records, cfg.group_a, cfg.group_b, parse_measure(m));
    }
    return out;
  }
};

void save_embedding_file(const Embedding& e, const fs::path& path) {
  std::ostringstream ss;
  save_embedding(e, ss);
  write_file_atomic(path.string(), ss.str());
}

std::vector<std::string> resolvable(const Embedding& e, const std::vector<std::string>& words,
                                    std::vector<std::string>& warnings, const char* set) {
  std::vector<std::string> out;
  for (const auto& w : words) {
    if (e.resolves(w)) {
      out.push_back(w);
    } else {
      warnings.push_back(std::string("modification set ") + set + ": dropping \"" + w +
                         "\" (not in embedding vocabulary)");
    }
  }
  return out;
}

}  // namespace

void PipelineConfig::validate() const {
  if (output_dir.empty()) throw InvalidArgument("config: output_dir is required");
  if (resamples == 0) throw InvalidArgument("config: resamples must be at least 1");
  if (intrinsic_metrics.empty() || extrinsic_measures.empty()) {
    throw InvalidArgument("config: at least one intrinsic and one extrinsic metric are required");
  }
  for (const auto& m : intrinsic_metrics) {
    if (!kIntrinsicNames.contains(m)) {
      throw InvalidArgument("config: unknown intrinsic metric \"" + m + "\"");
    }
  }
  for (const auto& m : extrinsic_measures) parse_measure(m);
  if (rnsb_seed_count == 0) throw InvalidArgument("config: rnsb_seeds must be at least 1");
  if (!(classifier_regularization > 0.0) || !(rnsb_regularization > 0.0)) {
    throw InvalidArgument("config: regularization strengths must be positive");
  }
  auto require = [](const std::string& path, const char* what) {
    if (path.empty()) throw InvalidArgument(std::string("config: ") + what + " is required");
    if (!fs::exists(path)) {
      throw InvalidArgument(std::string("config: ") + what + " does not exist: " + path);
    }
  };
  if (source == Source::kSynthetic) {
    if (betas.size() < 3) throw InvalidArgument("config: at least three betas are required");
    for (double b : betas) {
      SyntheticSpec s = synthetic;
      s.bias_strength = b;
      s.validate();
    }
    if (docs_per_group < 10 || test_docs_per_group < 10) {
      throw InvalidArgument("config: docs_per_group must be at least 10");
    }
  } else {
    require(embedding_path, "embedding");
    require(wordsets_path, "wordsets");
    require(corpus_path, "corpus");
    require(test_corpus_path, "test_corpus");
    if (!aux_embedding_path.empty()) require(aux_embedding_path, "aux_embedding");
    if (!mismatched_wordsets_path.empty()) require(mismatched_wordsets_path, "mismatched_wordsets");
    for (double p : balance_grid) BalanceConfig{BiasMode::kDebias, p, 0}.validate();
    if (expansion_k == 0) throw InvalidArgument("config: expansion_k must be at least 1");
  }
}

PipelineConfig parse_pipeline_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw InvalidArgument(std::string("config: invalid JSON: ") + ex.what());
  }
  check_keys(j,
             {"source", "output_dir", "seed", "resamples", "intrinsic_metrics", "extrinsic_measures",
              "group_a", "group_b", "classifier_regularization", "rnsb_regularization",
              "rnsb_seeds", "synthetic", "embedding"},
             "");
  PipelineConfig c;
  if (!j.contains("seed")) throw InvalidArgument("config: \"seed\" is required");
  if (!j.contains("output_dir")) throw InvalidArgument("config: \"output_dir\" is required");
  c.seed = get_field<std::uint64_t>(j, "seed", "");
  c.output_dir = get_field<std::string>(j, "output_dir", "");
  const std::string source = j.contains("source") ? get_field<std::string>(j, "source", "")
                                                  : std::string("synthetic");
  if (source == "synthetic") {
    c.source = PipelineConfig::Source::kSynthetic;
  } else if (source == "embedding") {
    c.source = PipelineConfig::Source::kEmbedding;
  } else {
    throw InvalidArgument("config: source must be \"synthetic\" or \"embedding\"");
  }
  if (j.contains("resamples")) c.resamples = get_field<std::size_t>(j, "resamples", "");
  if (j.contains("intrinsic_metrics")) {
    c.intrinsic_metrics = get_field<std::vector<std::string>>(j, "intrinsic_metrics", "");
  }
  if (j.contains("extrinsic_measures")) {
    c.extrinsic_measures = get_field<std::vector<std::string>>(j, "extrinsic_measures", "");
  }
  if (j.contains("group_a")) c.group_a = get_field<std::string>(j, "group_a", "");
  if (j.contains("group_b")) c.group_b = get_field<std::string>(j, "group_b", "");
  if (j.contains("classifier_regularization")) {
    c.classifier_regularization = get_field<double>(j, "classifier_regularization", "");
  }
  if (j.contains("rnsb_regularization")) {
    c.rnsb_regularization = get_field<double>(j, "rnsb_regularization", "");
  }
  if (j.contains("rnsb_seeds")) c.rnsb_seed_count = get_field<std::size_t>(j, "rnsb_seeds", "");

  if (j.contains("synthetic")) {
    const auto& s = j.at("synthetic");
    const std::string w = "synthetic.";
    check_keys(s,
               {"betas", "dim", "noise", "t1_size", "t2_size", "a1_size", "a2_size", "filler_size",
                "docs_per_group", "test_docs_per_group"},
               w);
    if (s.contains("betas")) c.betas = get_field<std::vector<double>>(s, "betas", w);
    if (s.contains("dim")) c.synthetic.dim = get_field<std::size_t>(s, "dim", w);
    if (s.contains("noise")) c.synthetic.noise_scale = get_field<double>(s, "noise", w);
    if (s.contains("t1_size")) c.synthetic.t1_size = get_field<std::size_t>(s, "t1_size", w);
    if (s.contains("t2_size")) c.synthetic.t2_size = get_field<std::size_t>(s, "t2_size", w);
    if (s.contains("a1_size")) c.synthetic.a1_size = get_field<std::size_t>(s, "a1_size", w);
    if (s.contains("a2_size")) c.synthetic.a2_size = get_field<std::size_t>(s, "a2_size", w);
    if (s.contains("filler_size")) {
      c.synthetic.filler_size = get_field<std::size_t>(s, "filler_size", w);
    }
    if (s.contains("docs_per_group")) {
      c.docs_per_group = get_field<std::size_t>(s, "docs_per_group", w);
    }
    if (s.contains("test_docs_per_group")) {
      c.test_docs_per_group = get_field<std::size_t>(s, "test_docs_per_group", w);
    }
  }
  if (j.contains("embedding")) {
    const auto& s = j.at("embedding");
    const std::string w = "embedding.";
    check_keys(s,
               {"path", "wordsets", "corpus", "test_corpus", "aux_embedding",
                "mismatched_wordsets", "expansion_k", "attract_repel", "balance",
                "attract_repel_epochs", "balance_grid"},
               w);
    if (s.contains("path")) c.embedding_path = get_field<std::string>(s, "path", w);
    if (s.contains("wordsets")) c.wordsets_path = get_field<std::string>(s, "wordsets", w);
    if (s.contains("corpus")) c.corpus_path = get_field<std::string>(s, "corpus", w);
    if (s.contains("test_corpus")) c.test_corpus_path = get_field<std::string>(s, "test_corpus", w);
    if (s.contains("aux_embedding")) {
      c.aux_embedding_path = get_field<std::string>(s, "aux_embedding", w);
    }
    if (s.contains("mismatched_wordsets")) {
      c.mismatched_wordsets_path = get_field<std::string>(s, "mismatched_wordsets", w);
    }
    if (s.contains("expansion_k")) c.expansion_k = get_field<std::size_t>(s, "expansion_k", w);
    if (s.contains("attract_repel")) c.attract_repel = get_field<bool>(s, "attract_repel", w);
    if (s.contains("balance")) c.balance = get_field<bool>(s, "balance", w);
    if (s.contains("attract_repel_epochs")) {
      c.attract_repel_epochs = get_field<std::size_t>(s, "attract_repel_epochs", w);
    }
    if (s.contains("balance_grid")) {
      c.balance_grid = get_field<std::vector<double>>(s, "balance_grid", w);
    }
  }
  if (c.source == PipelineConfig::Source::kEmbedding &&
      (!j.contains("group_a") || !j.contains("group_b"))) {
    throw InvalidArgument("config: group_a and group_b are required for the embedding source");
  }
  return c;
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  PipelineResult result;
  Evaluator eval{cfg, result.warnings};
  const fs::path out_dir(cfg.output_dir);
  fs::create_directories(out_dir / "variants");
  fs::create_directories(out_dir / "scatter");

  std::vector<std::string> intrinsic_cols;

  if (cfg.source == PipelineConfig::Source::kSynthetic) {
    const WordSetQuad mismatched = mismatched_wordsets(cfg.synthetic, mix_seed(cfg.seed, 7));
    for (std::size_t i = 0; i < cfg.betas.size(); ++i) {
      SyntheticSpec spec = cfg.synthetic;
      spec.bias_strength = cfg.betas[i];
      spec.seed = mix_seed(cfg.seed, i);
      const auto [e, quad] = make_biased_embedding(spec);
      SyntheticSpec test_spec = spec;
      test_spec.seed = mix_seed(spec.seed, 100);
      const auto train = make_biased_corpus(spec, cfg.docs_per_group);
      const auto test = make_biased_corpus(test_spec, cfg.test_docs_per_group);

      const std::string id = beta_id(cfg.betas[i]);
      auto values = eval.intrinsic(e, quad, "", id);
      auto mism = eval.intrinsic(e, mismatched, "_mismatched", id);
      values.insert(mism.begin(), mism.end());
      auto ext = eval.extrinsic(e, train, test, mix_seed(cfg.seed, 5));
      values.insert(ext.begin(), ext.end());

      const std::string rel = "variants/" + id + ".vec";
      save_embedding_file(e, out_dir / rel);
      ojson params;
      params["beta"] = cfg.betas[i];
      params["seed"] = spec.seed;
      params["noise"] = spec.noise_scale;
      result.manifest.push_back({id, "embedding", params.dump(), rel});
      result.table.add_row(id, values, {{"beta", fmt(cfg.betas[i])}});
    }
    for (const auto& m : cfg.intrinsic_metrics) intrinsic_cols.push_back(m);
    for (const auto& m : cfg.intrinsic_metrics) intrinsic_cols.push_back(m + "_mismatched");
  } else {
    const Embedding base = load_embedding_file(cfg.embedding_path);
    const WordSetQuad quad = load_wordsets_file(cfg.wordsets_path);
    quad.validate();
    const WordSetQuad eval_quad = prune_weat_targets(quad, base, mix_seed(cfg.seed, 11));
    std::optional<WordSetQuad> mismatched;
    if (!cfg.mismatched_wordsets_path.empty()) {
      mismatched = prune_weat_targets(load_wordsets_file(cfg.mismatched_wordsets_path), base,
                                      mix_seed(cfg.seed, 12));
    }
    WordSetQuad mod_quad = quad;
    if (!cfg.aux_embedding_path.empty()) {
      const Embedding aux = load_embedding_file(cfg.aux_embedding_path);
      auto expanded = expand_word_sets(quad, aux, cfg.expansion_k);
      for (const auto& w : expanded.skipped) {
        result.warnings.push_back("expansion: \"" + w + "\" not in auxiliary vocabulary, skipped");
      }
      mod_quad = std::move(expanded.quad);
    }
    mod_quad.t1 = resolvable(base, mod_quad.t1, result.warnings, "t1");
    mod_quad.t2 = resolvable(base, mod_quad.t2, result.warnings, "t2");
    mod_quad.a1 = resolvable(base, mod_quad.a1, result.warnings, "a1");
    mod_quad.a2 = resolvable(base, mod_quad.a2, result.warnings, "a2");
    mod_quad.validate();
    write_file_atomic((out_dir / "modification_wordsets.json").string(), wordsets_to_json(mod_quad));

    const LabeledCorpus train = load_corpus_file(cfg.corpus_path);
    const LabeledCorpus test = load_corpus_file(cfg.test_corpus_path);
    const std::uint64_t clf_seed = mix_seed(cfg.seed, 5);

    auto score = [&](const std::string& id, const Embedding& e,
                     std::map<std::string, std::string> params) {
      auto values = eval.intrinsic(e, eval_quad, "", id);
      if (mismatched) {
        auto m = eval.intrinsic(e, *mismatched, "_mismatched", id);
        values.insert(m.begin(), m.end());
      }
      auto ext = eval.extrinsic(e, train, test, clf_seed);
      values.insert(ext.begin(), ext.end());
      result.table.add_row(id, values, std::move(params));
    };

    score("original", base, {});
    result.manifest.push_back({"original", "embedding", "{}", cfg.embedding_path});

    if (cfg.attract_repel) {
      AttractRepelConfig ar;
      ar.epochs = cfg.attract_repel_epochs;
      for (auto& v : generate_attract_repel_grid(base, mod_quad, cfg.seed, ar)) {
        const std::string rel = "variants/" + v.id + ".vec";
        save_embedding_file(v.embedding, out_dir / rel);
        ojson params;
        params["mode"] = to_string(v.mode);
        params["delta_sim"] = v.config.synonym_margin;
        params["delta_ant"] = v.config.antonym_margin;
        params["lambda"] = v.config.regularization;
        params["batch_syn"] = v.config.synonym_batch;
        params["batch_ant"] = v.config.antonym_batch;
        params["epochs"] = v.config.epochs;
        params["seed"] = v.config.seed;
        result.manifest.push_back({v.id, "embedding", params.dump(), rel});
        score(v.id, v.embedding, {{"mode", to_string(v.mode)}});
      }
    }
    if (cfg.balance) {
      std::vector<std::vector<std::string>> sentences;
      for (const auto& doc : train) sentences.push_back(doc.tokens);
      for (auto& v : generate_balance_grid(sentences, mod_quad, cfg.seed, cfg.balance_grid)) {
        const std::string rel = "variants/" + v.id + ".txt";
        std::ostringstream ss;
        save_sentences(v.sentences, ss);
        write_file_atomic((out_dir / rel).string(), ss.str());
        ojson params;
        params["mode"] = to_string(v.config.mode);
        params["p"] = v.config.keep_probability;
        params["seed"] = v.config.seed;
        result.manifest.push_back({v.id, "corpus", params.dump(), rel});
      }
    }
    for (const auto& m : cfg.intrinsic_metrics) intrinsic_cols.push_back(m);
    if (mismatched) {
      for (const auto& m : cfg.intrinsic_metrics) intrinsic_cols.push_back(m + "_mismatched");
    }
  }

  std::vector<std::string> extrinsic_cols;
  for (const auto& m : cfg.extrinsic_measures) extrinsic_cols.push_back(extrinsic_column(m));
  // Columns that never received a value (e.g. every WEAT was degenerate) are skipped.
  std::vector<std::string> present;
  for (const auto& c : intrinsic_cols) {
    if (result.table.has_column(c)) present.push_back(c);
  }

  result.cells = correlate_table(result.table, present, extrinsic_cols, cfg.resamples, cfg.seed);

  {
    std::ostringstream ss;
    write_run_table(result.table, ss);
    write_file_atomic((out_dir / "run_table.csv").string(), ss.str());
  }
  {
    std::ostringstream ss;
    write_correlation_grid(result.cells, ss);
    write_file_atomic((out_dir / "correlation_grid.csv").string(), ss.str());
  }
  for (const auto& ic : present) {
    for (const auto& ec : extrinsic_cols) {
      std::ostringstream ss;
      write_scatter_csv(emit_scatter(result.table, ic, ec), ss);
      write_file_atomic((out_dir / "scatter" / (ic + "__" + ec + ".csv")).string(), ss.str());
    }
  }
  {
    ojson manifest = ojson::array();
    for (const auto& m : result.manifest) {
      ojson entry;
      entry["id"] = m.id;
      entry["kind"] = m.kind;
      entry["params"] = ojson::parse(m.params_json);
      entry["output_path"] = m.output_path;
      manifest.push_back(std::move(entry));
    }
    write_file_atomic((out_dir / "manifest.json").string(), manifest.dump(2) + "\n");
  }
  return result;
}

}  // namespace wordbias
