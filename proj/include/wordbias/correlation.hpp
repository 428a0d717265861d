#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace wordbias {

// Average ranks (1-based); ties share the mean of the ranks they span.
std::vector<double> average_ranks(const std::vector<double>& values);

// Pearson correlation of the average ranks.
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

constexpr std::size_t kExactPermutationLimit = 8;
constexpr std::size_t kDefaultResamples = 9999;

// Two-sided permutation test of Spearman's rho: twice the smaller one-sided
// p-value, capped at 1. Up to kExactPermutationLimit points every permutation
// is enumerated; beyond that `resamples` seeded shuffles are drawn and each
// one-sided p-value uses the +1 correction (1 + hits) / (resamples + 1), so
// the smallest attainable value is 2 / (resamples + 1).
double permutation_pvalue(const std::vector<double>& x, const std::vector<double>& y,
                          std::size_t resamples = kDefaultResamples, std::uint64_t seed = 0);

// The two estimators behind permutation_pvalue, usable directly.
double permutation_pvalue_exact(const std::vector<double>& x, const std::vector<double>& y);
double permutation_pvalue_sampled(const std::vector<double>& x, const std::vector<double>& y,
                                  std::size_t resamples, std::uint64_t seed);

struct RunRow {
  std::string id;
  std::vector<std::optional<double>> values;  // aligned with RunTable::columns
  std::map<std::string, std::string> params;  // in-memory only
};

class RunTable {
 public:
  RunTable() = default;
  explicit RunTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<RunRow>& rows() const { return rows_; }
  std::size_t column_index(const std::string& name) const;
  bool has_column(const std::string& name) const;

  // Adds a row; metrics not named in `values` are missing. Column names not yet
  // in the table are appended.
  void add_row(const std::string& id, const std::map<std::string, double>& values,
               std::map<std::string, std::string> params = {});

  std::optional<double> value(std::size_t row, const std::string& column) const;

 private:
  std::vector<std::string> columns_;
  std::vector<RunRow> rows_;
};

// First column variant_id, then one column per metric; empty cell = missing.
RunTable read_run_table(std::istream& in);
void write_run_table(const RunTable& table, std::ostream& out);

struct CorrelationCell {
  std::string intrinsic;
  std::string extrinsic;
  double rho = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  bool valid = false;
  std::string note;  // reason when invalid
};

// One cell per (intrinsic, extrinsic) pair, row-major over intrinsic columns.
// Rows missing either value are dropped for that cell only. Cells with fewer
// than three complete pairs or constant ranks are flagged invalid. Each cell's
// Monte Carlo seed is derived from the master seed and the two column names.
std::vector<CorrelationCell> correlate_table(const RunTable& table,
                                             const std::vector<std::string>& intrinsic_cols,
                                             const std::vector<std::string>& extrinsic_cols,
                                             std::size_t resamples = kDefaultResamples,
                                             std::uint64_t seed = 0);

void write_correlation_grid(const std::vector<CorrelationCell>& cells, std::ostream& out);

struct ScatterPoint {
  std::string variant_id;
  double x = 0.0;
  double y = 0.0;
};

std::vector<ScatterPoint> emit_scatter(const RunTable& table, const std::string& x_col,
                                       const std::string& y_col);
void write_scatter_csv(const std::vector<ScatterPoint>& points, std::ostream& out);
std::vector<ScatterPoint> read_scatter_csv(std::istream& in);

}  // namespace wordbias
