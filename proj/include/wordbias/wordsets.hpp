#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wordbias/embedding.hpp"

namespace wordbias {

// Target sets t1/t2 and attribute sets a1/a2. Entries may be multi-word
// expressions separated by single spaces.
struct WordSetQuad {
  std::vector<std::string> t1;
  std::vector<std::string> t2;
  std::vector<std::string> a1;
  std::vector<std::string> a2;

  // Lowercases every entry in place.
  void normalize();
  // Throws InvalidArgument unless all sets are non-empty and pairwise disjoint
  // after lowercasing.
  void validate() const;

  friend bool operator==(const WordSetQuad&, const WordSetQuad&) = default;
};

WordSetQuad load_wordsets_file(const std::string& path);
WordSetQuad parse_wordsets_json(const std::string& text);
std::string wordsets_to_json(const WordSetQuad& quad);

// Drops target expressions that do not resolve, then removes a seeded random
// sample from the larger target set until |t1| == |t2|. Attribute words must all
// resolve.
WordSetQuad prune_weat_targets(const WordSetQuad& quad, const Embedding& e, std::uint64_t seed);

}  // namespace wordbias
