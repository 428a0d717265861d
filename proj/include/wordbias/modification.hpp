#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wordbias/embedding.hpp"
#include "wordbias/wordsets.hpp"

namespace wordbias {

enum class BiasMode { kDebias, kOverbias };

const char* to_string(BiasMode mode);
BiasMode parse_bias_mode(const std::string& s);

struct ExpansionResult {
  WordSetQuad quad;
  // Seed words that were not in the auxiliary vocabulary and so were not expanded.
  std::vector<std::string> skipped;
};

// For every original entry (scan order t1, t2, a1, a2), appends its k nearest
// neighbours in `aux` to the entry's own set unless the neighbour already
// belongs to any of the four sets.
ExpansionResult expand_word_sets(const WordSetQuad& quad, const Embedding& aux, std::size_t k = 10);

enum class SentenceClass { kStereo, kAnti, kBoth, kNeutral };

const char* to_string(SentenceClass c);

// Stereotypical: contains (t1 and a1) or (t2 and a2). Anti-stereotypical:
// (t1 and a2) or (t2 and a1). Multi-word entries match contiguous tokens.
SentenceClass classify_sentence(const std::vector<std::string>& tokens, const WordSetQuad& quad);

struct BalanceConfig {
  BiasMode mode = BiasMode::kDebias;
  double keep_probability = 0.0;  // in [0, 1)
  std::uint64_t seed = 0;

  void validate() const;
};

// Keeps each targeted sentence (stereo or both when debiasing; anti or both when
// over-biasing) with probability keep_probability. Other sentences always stay;
// order is preserved.
std::vector<std::vector<std::string>> balance_corpus(
    const std::vector<std::vector<std::string>>& sentences, const WordSetQuad& quad,
    const BalanceConfig& cfg);

using WordPair = std::pair<std::string, std::string>;

struct PairSets {
  std::vector<WordPair> synonyms;
  std::vector<WordPair> antonyms;
};

// Debias: synonyms t1 x a2 + t2 x a1, antonyms t1 x a1 + t2 x a2. Over-bias swaps them.
PairSets build_pairs(const WordSetQuad& quad, BiasMode mode);

struct AttractRepelConfig {
  double synonym_margin = 1.0;   // delta_sim
  double antonym_margin = 1.0;   // delta_ant
  double regularization = 1e-2;  // lambda
  std::size_t synonym_batch = 50;
  std::size_t antonym_batch = 50;
  std::size_t epochs = 50;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;

  void validate() const;
};

struct AttractRepelResult {
  Embedding embedding;
  // True when both pair lists were empty and only normalization was applied.
  bool identity = false;
};

// Margin-based specialization: synonym pairs are pulled together and antonym
// pairs pushed apart relative to their hardest in-batch negatives, with an L2
// pull back to the (normalized) input vectors. All rows are unit-normalized.
AttractRepelResult attract_repel(const Embedding& e, const std::vector<WordPair>& synonyms,
                                 const std::vector<WordPair>& antonyms,
                                 const AttractRepelConfig& cfg);

// Mean cosine over the pairs, used to check that specialization moved things.
double mean_pair_cosine(const Embedding& e, const std::vector<WordPair>& pairs);

// Variant grids.
struct BalanceVariant {
  std::string id;
  BalanceConfig config;
  std::vector<std::vector<std::string>> sentences;
};

struct EmbeddingVariant {
  std::string id;
  BiasMode mode = BiasMode::kDebias;
  AttractRepelConfig config;
  Embedding embedding;
};

std::vector<double> default_balance_grid();  // 0.0, 0.1, ..., 0.9

struct AttractRepelGridPoint {
  double synonym_margin;
  double antonym_margin;
  double regularization;
};

std::vector<AttractRepelGridPoint> default_attract_repel_grid();  // 2 x 2 x 3

std::string balance_variant_id(BiasMode mode, double p);
std::string attract_repel_variant_id(BiasMode mode, const AttractRepelGridPoint& point);

// 10 debias + 10 over-bias corpora. Per-variant seeds derive from `seed`.
std::vector<BalanceVariant> generate_balance_grid(
    const std::vector<std::vector<std::string>>& sentences, const WordSetQuad& quad,
    std::uint64_t seed, const std::vector<double>& grid = default_balance_grid());

// 12 debias + 12 over-bias embeddings.
std::vector<EmbeddingVariant> generate_attract_repel_grid(
    const Embedding& e, const WordSetQuad& quad, std::uint64_t seed,
    const AttractRepelConfig& base = {},
    const std::vector<AttractRepelGridPoint>& grid = default_attract_repel_grid());

}  // namespace wordbias
