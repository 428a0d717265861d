#include "wordbias/extrinsic.hpp"

#include "wordbias/common.hpp"
#include "wordbias/csv.hpp"

namespace wordbias {

GroupScores grouped_prf(const std::vector<PredictionRecord>& records, int positive) {
  GroupScores scores;
  for (const auto& r : records) {
    if (r.group.empty()) throw InvalidArgument("prediction record has an empty group");
    auto& s = scores[r.group];
    ++s.support;
    const bool gold_pos = r.gold == positive;
    const bool pred_pos = r.predicted == positive;
    if (gold_pos && pred_pos) ++s.true_positive;
    else if (!gold_pos && pred_pos) ++s.false_positive;
    else if (gold_pos && !pred_pos) ++s.false_negative;
    else ++s.true_negative;
  }
  for (auto& [group, s] : scores) {
    const auto tp = static_cast<double>(s.true_positive);
    const auto pred = static_cast<double>(s.true_positive + s.false_positive);
    const auto gold = static_cast<double>(s.true_positive + s.false_negative);
    s.precision = pred > 0 ? tp / pred : 0.0;
    s.recall = gold > 0 ? tp / gold : 0.0;
    s.f1 = s.precision + s.recall > 0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
  }
  return scores;
}

Measure parse_measure(const std::string& s) {
  if (s == "precision") return Measure::kPrecision;
  if (s == "recall") return Measure::kRecall;
  if (s == "f1") return Measure::kF1;
  throw InvalidArgument("unknown measure \"" + s + "\" (expected precision, recall or f1)");
}

const char* to_string(Measure m) {
  switch (m) {
    case Measure::kPrecision: return "precision";
    case Measure::kRecall: return "recall";
    case Measure::kF1: return "f1";
  }
  return "f1";
}

double measure_of(const GroupScore& s, Measure m) {
  switch (m) {
    case Measure::kPrecision: return s.precision;
    case Measure::kRecall: return s.recall;
    case Measure::kF1: return s.f1;
  }
  return s.f1;
}

double bias_score(const std::vector<PredictionRecord>& records, const std::string& group_a,
                  const std::string& group_b, Measure measure, int positive) {
  const auto scores = grouped_prf(records, positive);
  auto a = scores.find(group_a);
  if (a == scores.end()) throw InvalidArgument("group \"" + group_a + "\" has no records");
  auto b = scores.find(group_b);
  if (b == scores.end()) throw InvalidArgument("group \"" + group_b + "\" has no records");
  return measure_of(a->second, measure) - measure_of(b->second, measure);
}

std::vector<PredictionRecord> read_predictions_csv(std::istream& in) {
  const auto rows = read_csv(in);
  if (rows.empty() || rows[0] != std::vector<std::string>{"gold", "pred", "group"}) {
    throw FormatError("prediction csv: expected header gold,pred,group");
  }
  auto label = [](const std::string& s, std::size_t row) {
    if (s == "0") return 0;
    if (s == "1") return 1;
    throw FormatError("prediction csv: row " + std::to_string(row) + ": label \"" + s +
                      "\" is not 0 or 1");
  };
  std::vector<PredictionRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 3) {
      throw FormatError("prediction csv: row " + std::to_string(i) + " needs 3 fields");
    }
    if (r[2].empty()) throw FormatError("prediction csv: row " + std::to_string(i) + ": empty group");
    out.push_back({label(r[0], i), label(r[1], i), r[2]});
  }
  return out;
}

void write_predictions_csv(const std::vector<PredictionRecord>& records, std::ostream& out) {
  write_csv_row(out, {"gold", "pred", "group"});
  for (const auto& r : records) {
    write_csv_row(out, {std::to_string(r.gold), std::to_string(r.predicted), r.group});
  }
}

std::vector<double> document_vector(const std::vector<std::string>& tokens, const Embedding& e,
                                    bool* any_known) {
  std::vector<double> v(e.dim(), 0.0);
  std::size_t known = 0;
  for (const auto& t : tokens) {
    auto idx = e.index_of(t);
    if (!idx) continue;
    ++known;
    auto r = e.row(*idx);
    for (std::size_t d = 0; d < v.size(); ++d) v[d] += r[d];
  }
  if (known > 0) {
    for (double& x : v) x /= static_cast<double>(known);
  }
  if (any_known) *any_known = known > 0;
  return v;
}

double StandinClassifier::hate_probability(const std::vector<std::string>& tokens,
                                           const Embedding& e) const {
  if (e.dim() != dim) {
    throw InvalidArgument("classifier was trained for dimension " + std::to_string(dim) +
                          ", embedding has " + std::to_string(e.dim()));
  }
  return model.predict_probability(document_vector(tokens, e));
}

StandinClassifier train_standin_classifier(const LabeledCorpus& corpus, const Embedding& e,
                                           double regularization, std::uint64_t seed,
                                           const LogisticOptions& options) {
  if (corpus.empty()) throw InvalidArgument("stand-in classifier: corpus is empty");
  std::vector<double> x;
  std::vector<int> y;
  for (const auto& doc : corpus) {
    bool known = false;
    auto v = document_vector(doc.tokens, e, &known);
    if (!known) continue;
    x.insert(x.end(), v.begin(), v.end());
    y.push_back(doc.hate == HateLabel::kHate ? 1 : 0);
  }
  if (y.empty()) {
    throw InvalidArgument("stand-in classifier: no document has an in-vocabulary token");
  }
  return {train_logistic(x, e.dim(), y, regularization, seed, options), e.dim()};
}

std::vector<PredictionRecord> predict_records(const StandinClassifier& classifier,
                                              const LabeledCorpus& corpus, const Embedding& e) {
  std::vector<PredictionRecord> out;
  out.reserve(corpus.size());
  for (const auto& doc : corpus) {
    const double p = classifier.hate_probability(doc.tokens, e);
    out.push_back({doc.hate == HateLabel::kHate ? 1 : 0, p >= 0.5 ? 1 : 0, doc.group});
  }
  return out;
}

}  // namespace wordbias
