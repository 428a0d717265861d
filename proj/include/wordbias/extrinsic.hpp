#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "wordbias/corpus.hpp"
#include "wordbias/embedding.hpp"
#include "wordbias/logistic.hpp"

namespace wordbias {

struct PredictionRecord {
  int gold = 0;
  int predicted = 0;
  std::string group;
};

struct GroupScore {
  std::size_t true_positive = 0;
  std::size_t false_positive = 0;
  std::size_t false_negative = 0;
  std::size_t true_negative = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // records in the group
};

using GroupScores = std::map<std::string, GroupScore>;

// Zero denominators score 0 rather than being undefined.
GroupScores grouped_prf(const std::vector<PredictionRecord>& records, int positive = 1);

enum class Measure { kPrecision, kRecall, kF1 };

Measure parse_measure(const std::string& s);
const char* to_string(Measure m);
double measure_of(const GroupScore& s, Measure m);

// measure(group_a) - measure(group_b).
double bias_score(const std::vector<PredictionRecord>& records, const std::string& group_a,
                  const std::string& group_b, Measure measure, int positive = 1);

// CSV with header gold,pred,group and 0/1 labels.
std::vector<PredictionRecord> read_predictions_csv(std::istream& in);
void write_predictions_csv(const std::vector<PredictionRecord>& records, std::ostream& out);

// Bag-of-embeddings hate classifier: logistic regression over the mean of the
// in-vocabulary token vectors of a document.
struct StandinClassifier {
  LogisticModel model;
  std::size_t dim = 0;

  // Documents with no in-vocabulary token get the bias-only probability.
  double hate_probability(const std::vector<std::string>& tokens, const Embedding& e) const;
};

std::vector<double> document_vector(const std::vector<std::string>& tokens, const Embedding& e,
                                    bool* any_known = nullptr);

StandinClassifier train_standin_classifier(const LabeledCorpus& corpus, const Embedding& e,
                                           double regularization, std::uint64_t seed,
                                           const LogisticOptions& options = {});

// One record per document: gold hate label, prediction at threshold 0.5, group.
std::vector<PredictionRecord> predict_records(const StandinClassifier& classifier,
                                              const LabeledCorpus& corpus, const Embedding& e);

}  // namespace wordbias
