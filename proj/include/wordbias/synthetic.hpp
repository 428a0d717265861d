#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "wordbias/corpus.hpp"
#include "wordbias/embedding.hpp"
#include "wordbias/wordsets.hpp"

namespace wordbias {

// Parameters of a synthetic embedding/corpus pair with a planted bias.
struct SyntheticSpec {
  double bias_strength = 0.0;  // beta in [0, 1]
  std::size_t dim = 16;
  std::size_t t1_size = 8;
  std::size_t t2_size = 8;
  std::size_t a1_size = 8;
  std::size_t a2_size = 8;
  std::size_t filler_size = 64;
  double noise_scale = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Token carried by a share of the HS documents only; it is not part of the
// embedding vocabulary.
inline constexpr const char* kHateMarker = "hsmarker";
inline constexpr const char* kGroupOne = "g1";
inline constexpr const char* kGroupTwo = "g2";

// Coordinate 0 is the bias axis: a1 words point along +axis and a2 words along
// -axis. Target words interpolate between a neutral configuration (spread
// symmetrically around the axis, plus noise) at beta = 0 and the aligned
// configuration (t1 on +axis, t2 on -axis) at beta = 1. Filler words are random
// unit vectors. All rows are unit length.
std::pair<Embedding, WordSetQuad> make_biased_embedding(const SyntheticSpec& spec);

// Documents for groups g1 (t1 tokens) and g2 (t2 tokens). HS documents draw
// their content words mostly from a1, NON_HS documents from a2; with
// probability growing in beta a document additionally carries an attribute
// word stereotypical for its group.
LabeledCorpus make_biased_corpus(const SyntheticSpec& spec, std::size_t docs_per_group);

// Four disjoint sets of filler words, chosen by `seed`; they carry no planted
// association with the groups.
WordSetQuad mismatched_wordsets(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace wordbias
