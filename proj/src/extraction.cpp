#include "wordbias/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "wordbias/common.hpp"
#include "wordbias/csv.hpp"

namespace wordbias {

LabelAxis parse_axis(const std::string& s) {
  if (s == "hate") return LabelAxis::kHate;
  if (s == "group") return LabelAxis::kGroup;
  throw InvalidArgument("unknown label axis \"" + s + "\" (expected hate or group)");
}

bool in_axis_scope(const LabeledDocument& doc, LabelAxis axis) {
  if (axis == LabelAxis::kHate) return true;
  const auto g = to_lower(doc.group);
  return !g.empty() && g != "neutral" && g != "other";
}

std::string axis_label(const LabeledDocument& doc, LabelAxis axis) {
  return axis == LabelAxis::kHate ? std::string(to_string(doc.hate)) : doc.group;
}

std::size_t NaiveBayesParams::label_index(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw InvalidArgument("unknown label \"" + label + "\"");
  return static_cast<std::size_t>(it - labels.begin());
}

std::optional<std::size_t> NaiveBayesParams::find_word(const std::string& word) const {
  auto it = word_index.find(to_lower(word));
  if (it == word_index.end()) return std::nullopt;
  return it->second;
}

NaiveBayesParams estimate_nb(const LabeledCorpus& corpus, LabelAxis axis, double alpha) {
  if (corpus.empty()) throw InvalidArgument("naive bayes: corpus is empty");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgument("naive bayes: smoothing must be a finite value >= 0");
  }

  std::set<std::string> label_set;
  std::set<std::string> vocab_set;
  if (axis == LabelAxis::kHate) {
    label_set = {"HS", "NON_HS"};
  }
  for (const auto& doc : corpus) {
    if (!in_axis_scope(doc, axis)) continue;
    if (axis == LabelAxis::kGroup) label_set.insert(doc.group);
    for (const auto& t : doc.tokens) vocab_set.insert(t);
  }

  NaiveBayesParams p;
  p.axis = axis;
  p.alpha = alpha;
  p.labels.assign(label_set.begin(), label_set.end());
  p.vocabulary.assign(vocab_set.begin(), vocab_set.end());
  for (std::size_t i = 0; i < p.vocabulary.size(); ++i) p.word_index.emplace(p.vocabulary[i], i);
  if (axis == LabelAxis::kGroup && p.labels.size() < 2) {
    throw InvalidArgument("naive bayes: the group axis needs at least two group labels");
  }

  const std::size_t n_labels = p.labels.size();
  const std::size_t n_words = p.vocabulary.size();
  std::vector<std::vector<double>> counts(n_labels, std::vector<double>(n_words, 0.0));
  std::vector<double> token_totals(n_labels, 0.0);
  std::vector<std::size_t> doc_counts(n_labels, 0);
  p.document_frequency.assign(n_words, 0);
  p.corpus_frequency.assign(n_words, 0);

  std::size_t docs_in_scope = 0;
  std::vector<std::size_t> last_seen(n_words, std::numeric_limits<std::size_t>::max());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const auto& doc = corpus[d];
    if (!in_axis_scope(doc, axis)) continue;
    ++docs_in_scope;
    const std::size_t l = p.label_index(axis_label(doc, axis));
    ++doc_counts[l];
    for (const auto& t : doc.tokens) {
      const std::size_t w = p.word_index.at(t);
      counts[l][w] += 1.0;
      token_totals[l] += 1.0;
      ++p.corpus_frequency[w];
      if (last_seen[w] != d) {
        last_seen[w] = d;
        ++p.document_frequency[w];
      }
    }
  }
  for (std::size_t l = 0; l < n_labels; ++l) {
    if (doc_counts[l] == 0) {
      throw InvalidArgument("naive bayes: class \"" + p.labels[l] + "\" has no documents");
    }
  }

  p.priors.resize(n_labels);
  p.theta.assign(n_labels, std::vector<double>(n_words, 0.0));
  for (std::size_t l = 0; l < n_labels; ++l) {
    p.priors[l] = static_cast<double>(doc_counts[l]) / static_cast<double>(docs_in_scope);
    const double denom = token_totals[l] + alpha * static_cast<double>(n_words);
    for (std::size_t w = 0; w < n_words; ++w) p.theta[l][w] = (counts[l][w] + alpha) / denom;
  }
  return p;
}

namespace {

double pmi_at(const NaiveBayesParams& p, std::size_t l, std::size_t w) {
  double marginal = 0.0;
  for (std::size_t k = 0; k < p.labels.size(); ++k) marginal += p.priors[k] * p.theta[k][w];
  if (!(marginal > 0.0)) {
    throw DegenerateInputError("pmi undefined for \"" + p.vocabulary[w] +
                               "\": the word has zero probability under every class");
  }
  if (p.theta[l][w] == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log2(p.theta[l][w] / marginal);
}

}  // namespace

double pmi(const NaiveBayesParams& params, const std::string& label, const std::string& word) {
  const std::size_t l = params.label_index(label);
  auto w = params.find_word(word);
  if (!w) throw OovError(word);
  return pmi_at(params, l, *w);
}

std::vector<CandidateWord> extract_candidates(const LabeledCorpus& corpus, LabelAxis axis,
                                              const std::string& label,
                                              const ExtractionOptions& options) {
  if (options.top_n == 0) throw InvalidArgument("extract_candidates: top_n must be at least 1");
  const auto params = estimate_nb(corpus, axis, options.alpha);
  const std::size_t l = params.label_index(label);

  std::vector<CandidateWord> out;
  for (std::size_t w = 0; w < params.vocabulary.size(); ++w) {
    if (params.document_frequency[w] < options.min_docs) continue;
    out.push_back({params.vocabulary[w], pmi_at(params, l, w), params.document_frequency[w],
                   params.corpus_frequency[w]});
  }
  std::sort(out.begin(), out.end(), [](const CandidateWord& a, const CandidateWord& b) {
    if (a.pmi != b.pmi) return a.pmi > b.pmi;
    if (a.corpus_frequency != b.corpus_frequency) return a.corpus_frequency > b.corpus_frequency;
    return a.word < b.word;
  });
  if (out.size() > options.top_n) out.resize(options.top_n);
  return out;
}

std::vector<std::string> apply_curation(const std::vector<CandidateWord>& candidates,
                                        const std::unordered_set<std::string>& exclude,
                                        const std::vector<std::string>& include_extra,
                                        std::size_t final_n) {
  if (final_n == 0) throw InvalidArgument("apply_curation: final_n must be at least 1");
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& c : candidates) {
    if (exclude.contains(c.word)) continue;
    if (seen.insert(c.word).second) out.push_back(c.word);
  }
  for (const auto& w : include_extra) {
    if (seen.insert(w).second) out.push_back(w);
  }
  if (out.size() < final_n) {
    throw InvalidArgument("apply_curation: only " + std::to_string(out.size()) +
                          " words remain after curation, " + std::to_string(final_n) +
                          " requested");
  }
  out.resize(final_n);
  return out;
}

void write_candidates_csv(const std::vector<CandidateWord>& candidates, std::ostream& out) {
  write_csv_row(out, {"word", "pmi_bits", "doc_freq", "corpus_freq"});
  for (const auto& c : candidates) {
    write_csv_row(out, {c.word, format_double(c.pmi), std::to_string(c.document_frequency),
                        std::to_string(c.corpus_frequency)});
  }
}

std::vector<CandidateWord> read_candidates_csv(std::istream& in) {
  auto rows = read_csv(in);
  if (rows.empty() || rows[0] != std::vector<std::string>{"word", "pmi_bits", "doc_freq",
                                                          "corpus_freq"}) {
    throw FormatError("candidate csv: expected header word,pmi_bits,doc_freq,corpus_freq");
  }
  std::vector<CandidateWord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 4) throw FormatError("candidate csv: row " + std::to_string(i) + " needs 4 fields");
    double v = 0.0;
    if (r[1] == "-inf") {
      v = -std::numeric_limits<double>::infinity();
    } else {
      v = parse_double(r[1]);
    }
    out.push_back({r[0], v, static_cast<std::size_t>(parse_int(r[2])),
                   static_cast<std::size_t>(parse_int(r[3]))});
  }
  return out;
}

}  // namespace wordbias
