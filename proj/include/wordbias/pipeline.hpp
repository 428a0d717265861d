#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wordbias/correlation.hpp"
#include "wordbias/extrinsic.hpp"
#include "wordbias/synthetic.hpp"

namespace wordbias {

// Configuration of the end-to-end correlation study, read from JSON.
struct PipelineConfig {
  enum class Source { kSynthetic, kEmbedding };

  Source source = Source::kSynthetic;
  std::string output_dir;
  std::uint64_t seed = 0;
  std::size_t resamples = kDefaultResamples;

  // Metric selection. Intrinsic names: weat_effect_size, weat_statistic,
  // rnsb_kl, rnsb_signed. Extrinsic measures: precision, recall, f1.
  std::vector<std::string> intrinsic_metrics{"weat_effect_size", "weat_statistic", "rnsb_kl",
                                             "rnsb_signed"};
  std::vector<std::string> extrinsic_measures{"precision", "recall", "f1"};
  std::string group_a = kGroupOne;
  std::string group_b = kGroupTwo;
  double classifier_regularization = 1.0;
  double rnsb_regularization = 1.0;
  std::size_t rnsb_seed_count = 10;

  // Synthetic source.
  std::vector<double> betas{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  SyntheticSpec synthetic;
  std::size_t docs_per_group = 500;
  std::size_t test_docs_per_group = 500;

  // Embedding source.
  std::string embedding_path;
  std::string wordsets_path;
  std::string corpus_path;
  std::string test_corpus_path;
  std::string aux_embedding_path;         // optional, enables word-set expansion
  std::string mismatched_wordsets_path;   // optional
  std::size_t expansion_k = 10;
  bool attract_repel = true;
  bool balance = true;
  std::size_t attract_repel_epochs = 50;
  std::vector<double> balance_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

  // Checks value ranges and that every referenced input path exists.
  void validate() const;
};

// Throws InvalidArgument on unknown keys, wrong types or missing mandatory
// fields (output_dir, seed).
PipelineConfig parse_pipeline_config(const std::string& json_text);

struct ManifestEntry {
  std::string id;
  std::string kind;  // "embedding" or "corpus"
  std::string params_json;
  std::string output_path;
};

struct PipelineResult {
  RunTable table;
  std::vector<CorrelationCell> cells;
  std::vector<ManifestEntry> manifest;
  std::vector<std::string> warnings;
};

// Runs the study and writes run_table.csv, correlation_grid.csv,
// scatter/<intrinsic>__<extrinsic>.csv, manifest.json and the variant files
// under config.output_dir.
PipelineResult run_pipeline(const PipelineConfig& config);

std::string extrinsic_column(const std::string& measure);

}  // namespace wordbias
