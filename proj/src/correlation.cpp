#include "wordbias/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wordbias/common.hpp"
#include "wordbias/csv.hpp"

namespace wordbias {

namespace {

constexpr double kTieTolerance = 1e-12;

void check_pair(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw InvalidArgument("correlation: length mismatch (" + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()) + ")");
  }
  if (x.size() < 3) throw InvalidArgument("correlation: at least three points are required");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw InvalidArgument("correlation: values must be finite");
    }
  }
}

// Centered ranks and their sum of squares.
struct RankVector {
  std::vector<double> centered;
  double sum_squares = 0.0;
};

RankVector centered_ranks(const std::vector<double>& v) {
  RankVector r;
  r.centered = average_ranks(v);
  const double mean = (static_cast<double>(v.size()) + 1.0) / 2.0;
  for (double& x : r.centered) {
    x -= mean;
    r.sum_squares += x * x;
  }
  if (!(r.sum_squares > 0.0)) {
    throw DegenerateInputError("correlation: input is constant, rank variance is zero");
  }
  return r;
}

double rank_correlation(const RankVector& a, const RankVector& b) {
  return std::clamp(dot(a.centered, b.centered) / std::sqrt(a.sum_squares * b.sum_squares), -1.0,
                    1.0);
}

std::uint64_t hash_name(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
  check_pair(x, y);
  return rank_correlation(centered_ranks(x), centered_ranks(y));
}

namespace {

struct Tally {
  double observed;
  std::size_t greater = 0;
  std::size_t less = 0;

  void add(double r) {
    if (r >= observed - kTieTolerance) ++greater;
    if (r <= observed + kTieTolerance) ++less;
  }
};

double two_sided(double p_greater, double p_less) {
  return std::min(1.0, 2.0 * std::min(p_greater, p_less));
}

}  // namespace

double permutation_pvalue_exact(const std::vector<double>& x, const std::vector<double>& y) {
  check_pair(x, y);
  const auto rx = centered_ranks(x);
  const auto ry = centered_ranks(y);
  const std::size_t n = x.size();
  if (n > 12) throw InvalidArgument("exact permutation test: too many points to enumerate");
  Tally tally{rank_correlation(rx, ry)};

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  RankVector shuffled = ry;
  std::size_t total = 0;
  do {
    for (std::size_t i = 0; i < n; ++i) shuffled.centered[i] = ry.centered[perm[i]];
    tally.add(rank_correlation(rx, shuffled));
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  const double t = static_cast<double>(total);
  return two_sided(static_cast<double>(tally.greater) / t, static_cast<double>(tally.less) / t);
}

double permutation_pvalue_sampled(const std::vector<double>& x, const std::vector<double>& y,
                                  std::size_t resamples, std::uint64_t seed) {
  check_pair(x, y);
  if (resamples == 0) throw InvalidArgument("permutation test: resamples must be at least 1");
  const auto rx = centered_ranks(x);
  auto ry = centered_ranks(y);
  Tally tally{rank_correlation(rx, ry)};
  Rng rng(seed);
  for (std::size_t k = 0; k < resamples; ++k) {
    rng.shuffle(ry.centered);
    tally.add(rank_correlation(rx, ry));
  }
  const double denom = static_cast<double>(resamples) + 1.0;
  return two_sided((1.0 + static_cast<double>(tally.greater)) / denom,
                   (1.0 + static_cast<double>(tally.less)) / denom);
}

double permutation_pvalue(const std::vector<double>& x, const std::vector<double>& y,
                          std::size_t resamples, std::uint64_t seed) {
  if (resamples == 0) throw InvalidArgument("permutation test: resamples must be at least 1");
  if (x.size() <= kExactPermutationLimit) return permutation_pvalue_exact(x, y);
  return permutation_pvalue_sampled(x, y, resamples, seed);
}

RunTable::RunTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (columns_[i] == columns_[j]) {
        throw InvalidArgument("run table: duplicate column \"" + columns_[i] + "\"");
      }
    }
  }
}

std::size_t RunTable::column_index(const std::string& name) const {
  auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw InvalidArgument("run table has no column \"" + name + "\"");
  return static_cast<std::size_t>(it - columns_.begin());
}

bool RunTable::has_column(const std::string& name) const {
  return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

void RunTable::add_row(const std::string& id, const std::map<std::string, double>& values,
                       std::map<std::string, std::string> params) {
  if (id.empty()) throw InvalidArgument("run table: empty variant id");
  for (const auto& r : rows_) {
    if (r.id == id) throw InvalidArgument("run table: duplicate variant id \"" + id + "\"");
  }
  for (const auto& [name, v] : values) {
    if (!std::isfinite(v)) {
      throw InvalidArgument("run table: non-finite value for " + name + " in " + id);
    }
    if (!has_column(name)) {
      columns_.push_back(name);
      for (auto& r : rows_) r.values.emplace_back();
    }
  }
  RunRow row{id, std::vector<std::optional<double>>(columns_.size()), std::move(params)};
  for (const auto& [name, v] : values) row.values[column_index(name)] = v;
  rows_.push_back(std::move(row));
}

std::optional<double> RunTable::value(std::size_t row, const std::string& column) const {
  return rows_.at(row).values[column_index(column)];
}

RunTable read_run_table(std::istream& in) {
  const auto rows = read_csv(in);
  if (rows.empty() || rows[0].empty() || rows[0][0] != "variant_id") {
    throw FormatError("run table: first header column must be variant_id");
  }
  RunTable table(std::vector<std::string>(rows[0].begin() + 1, rows[0].end()));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != rows[0].size()) {
      throw FormatError("run table: row " + std::to_string(i) + " has " +
                        std::to_string(r.size()) + " fields, expected " +
                        std::to_string(rows[0].size()));
    }
    std::map<std::string, double> values;
    for (std::size_t c = 1; c < r.size(); ++c) {
      if (r[c].empty()) continue;
      const double v = parse_double(r[c]);
      if (!std::isfinite(v)) throw FormatError("run table: non-finite value in row " + r[0]);
      values[rows[0][c]] = v;
    }
    table.add_row(r[0], values);
  }
  return table;
}

void write_run_table(const RunTable& table, std::ostream& out) {
  std::vector<std::string> header{"variant_id"};
  header.insert(header.end(), table.columns().begin(), table.columns().end());
  write_csv_row(out, header);
  for (const auto& row : table.rows()) {
    std::vector<std::string> fields{row.id};
    for (const auto& v : row.values) fields.push_back(v ? format_double(*v) : "");
    write_csv_row(out, fields);
  }
}

std::vector<CorrelationCell> correlate_table(const RunTable& table,
                                             const std::vector<std::string>& intrinsic_cols,
                                             const std::vector<std::string>& extrinsic_cols,
                                             std::size_t resamples, std::uint64_t seed) {
  for (const auto& c : intrinsic_cols) table.column_index(c);
  for (const auto& c : extrinsic_cols) table.column_index(c);

  std::vector<CorrelationCell> cells;
  for (const auto& ic : intrinsic_cols) {
    for (const auto& ec : extrinsic_cols) {
      CorrelationCell cell;
      cell.intrinsic = ic;
      cell.extrinsic = ec;
      std::vector<double> x, y;
      for (std::size_t r = 0; r < table.rows().size(); ++r) {
        auto xv = table.value(r, ic);
        auto yv = table.value(r, ec);
        if (xv && yv) {
          x.push_back(*xv);
          y.push_back(*yv);
        }
      }
      cell.n = x.size();
      if (cell.n < 3) {
        cell.note = "fewer than 3 complete pairs";
        cells.push_back(std::move(cell));
        continue;
      }
      try {
        cell.rho = spearman_rho(x, y);
        const std::uint64_t cell_seed = mix_seed(seed, hash_name(ic) ^ (hash_name(ec) * 31));
        cell.p_value = permutation_pvalue(x, y, resamples, cell_seed);
        cell.valid = true;
      } catch (const DegenerateInputError& ex) {
        cell.rho = 0.0;
        cell.p_value = 1.0;
        cell.note = ex.what();
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

void write_correlation_grid(const std::vector<CorrelationCell>& cells, std::ostream& out) {
  write_csv_row(out, {"intrinsic", "extrinsic", "rho", "p_value", "n"});
  for (const auto& c : cells) {
    write_csv_row(out, {c.intrinsic, c.extrinsic, c.valid ? format_double(c.rho) : "",
                        c.valid ? format_double(c.p_value) : "", std::to_string(c.n)});
  }
}

std::vector<ScatterPoint> emit_scatter(const RunTable& table, const std::string& x_col,
                                       const std::string& y_col) {
  table.column_index(x_col);
  table.column_index(y_col);
  std::vector<ScatterPoint> out;
  for (std::size_t r = 0; r < table.rows().size(); ++r) {
    auto x = table.value(r, x_col);
    auto y = table.value(r, y_col);
    if (x && y) out.push_back({table.rows()[r].id, *x, *y});
  }
  return out;
}

void write_scatter_csv(const std::vector<ScatterPoint>& points, std::ostream& out) {
  write_csv_row(out, {"variant_id", "x", "y"});
  for (const auto& p : points) {
    write_csv_row(out, {p.variant_id, format_double(p.x), format_double(p.y)});
  }
}

std::vector<ScatterPoint> read_scatter_csv(std::istream& in) {
  const auto rows = read_csv(in);
  if (rows.empty() || rows[0] != std::vector<std::string>{"variant_id", "x", "y"}) {
    throw FormatError("scatter csv: expected header variant_id,x,y");
  }
  std::vector<ScatterPoint> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 3) throw FormatError("scatter csv: row " + std::to_string(i) + " needs 3 fields");
    out.push_back({rows[i][0], parse_double(rows[i][1]), parse_double(rows[i][2])});
  }
  return out;
}

}  // namespace wordbias
