#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace wordbias {

enum class HateLabel { kHate, kNonHate };

const char* to_string(HateLabel label);
HateLabel parse_hate_label(const std::string& s);

struct LabeledDocument {
  std::vector<std::string> tokens;
  HateLabel hate = HateLabel::kNonHate;
  std::string group;
};

using LabeledCorpus = std::vector<LabeledDocument>;

// JSON Lines: {"tokens": [...], "hate": "HS"|"NON_HS", "group": "<string>"}.
// Tokens are lowercased on load.
LabeledCorpus load_corpus(std::istream& in);
LabeledCorpus load_corpus_file(const std::string& path);
void save_corpus(const LabeledCorpus& corpus, std::ostream& out);

// Plain sentence corpus: one sentence per line, space-separated tokens.
std::vector<std::vector<std::string>> load_sentences(std::istream& in);
void save_sentences(const std::vector<std::vector<std::string>>& sentences, std::ostream& out);

}  // namespace wordbias
