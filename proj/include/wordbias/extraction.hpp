#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wordbias/corpus.hpp"

namespace wordbias {

enum class LabelAxis { kHate, kGroup };

LabelAxis parse_axis(const std::string& s);

// Multinomial Naive Bayes: class priors and per-class token distributions over
// the vocabulary of the documents in scope.
struct NaiveBayesParams {
  LabelAxis axis = LabelAxis::kHate;
  double alpha = 0.0;
  std::vector<std::string> labels;             // sorted
  std::vector<double> priors;                  // per label
  std::vector<std::string> vocabulary;         // sorted
  std::vector<std::vector<double>> theta;      // [label][word]
  std::vector<std::size_t> document_frequency; // per word, documents in scope
  std::vector<std::size_t> corpus_frequency;   // per word, token occurrences in scope
  std::unordered_map<std::string, std::size_t> word_index;

  std::size_t label_index(const std::string& label) const;
  std::optional<std::size_t> find_word(const std::string& word) const;
};

// On the group axis, documents labelled NEUTRAL or OTHER (any case) or with an
// empty group are left out.
bool in_axis_scope(const LabeledDocument& doc, LabelAxis axis);
std::string axis_label(const LabeledDocument& doc, LabelAxis axis);

NaiveBayesParams estimate_nb(const LabeledCorpus& corpus, LabelAxis axis, double alpha = 0.0);

// log2( theta[l][w] / sum_l' mu[l'] theta[l'][w] ). Returns -inf when the word
// never occurs under `label` but does under another one.
double pmi(const NaiveBayesParams& params, const std::string& label, const std::string& word);

struct CandidateWord {
  std::string word;
  double pmi = 0.0;  // bits
  std::size_t document_frequency = 0;
  std::size_t corpus_frequency = 0;
};

struct ExtractionOptions {
  std::size_t top_n = 40;
  std::size_t min_docs = 10;
  double alpha = 0.0;
};

// Words with document frequency >= min_docs ranked by PMI with `label`
// (descending), then corpus frequency (descending), then the word itself.
std::vector<CandidateWord> extract_candidates(const LabeledCorpus& corpus, LabelAxis axis,
                                              const std::string& label,
                                              const ExtractionOptions& options = {});

// Removes excluded words, appends `include_extra` in order, and keeps the first
// final_n. Throws when fewer than final_n words remain.
std::vector<std::string> apply_curation(const std::vector<CandidateWord>& candidates,
                                        const std::unordered_set<std::string>& exclude,
                                        const std::vector<std::string>& include_extra,
                                        std::size_t final_n);

void write_candidates_csv(const std::vector<CandidateWord>& candidates, std::ostream& out);
std::vector<CandidateWord> read_candidates_csv(std::istream& in);

}  // namespace wordbias
