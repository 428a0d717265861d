#include "wordbias/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace wordbias {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

}  // namespace

Embedding::Embedding(std::vector<std::string> words, std::vector<double> vectors,
                     std::size_t dim)
    : words_(std::move(words)), data_(std::move(vectors)), dim_(dim) {
  if (dim_ == 0) throw FormatError("embedding dimension must be positive");
  if (data_.size() != words_.size() * dim_) {
    throw FormatError("embedding has " + std::to_string(words_.size()) + " words but " +
                      std::to_string(data_.size()) + " values for dimension " +
                      std::to_string(dim_));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw FormatError("embedding contains a non-finite value");
  }
  std::unordered_set<std::string> seen;
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i].empty()) throw FormatError("embedding contains an empty word");
    if (!seen.insert(words_[i]).second) {
      throw FormatError("duplicate word in embedding: \"" + words_[i] + "\"");
    }
    index_.emplace(to_lower(words_[i]), i);  // first case variant wins
  }
}

Embedding Embedding::from_rows(std::vector<std::string> words,
                               const std::vector<std::vector<double>>& rows, std::size_t dim) {
  std::vector<double> data;
  data.reserve(rows.size() * dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) {
      throw FormatError("row " + std::to_string(i) + " has dimension " +
                        std::to_string(rows[i].size()) + ", expected " + std::to_string(dim));
    }
    data.insert(data.end(), rows[i].begin(), rows[i].end());
  }
  return Embedding(std::move(words), std::move(data), dim);
}

std::optional<std::size_t> Embedding::index_of(std::string_view word) const {
  auto it = index_.find(to_lower(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<double> Embedding::vector_of(std::string_view expression) const {
  const auto tokens = split_spaces(expression);
  std::vector<double> out(dim_, 0.0);
  for (const auto& tok : tokens) {
    if (tok.empty()) {
      throw InvalidArgument("malformed expression \"" + std::string(expression) +
                            "\": tokens must be separated by single spaces");
    }
    auto idx = index_of(tok);
    if (!idx) throw OovError(tok);
    auto r = row(*idx);
    for (std::size_t d = 0; d < dim_; ++d) out[d] += r[d];
  }
  if (tokens.size() > 1) {
    const double n = static_cast<double>(tokens.size());
    for (double& v : out) v /= n;
  }
  return out;
}

bool Embedding::resolves(std::string_view expression) const {
  for (const auto& tok : split_spaces(expression)) {
    if (tok.empty() || !contains(tok)) return false;
  }
  return true;
}

Embedding Embedding::with_data(std::vector<double> data) const {
  return Embedding(words_, std::move(data), dim_);
}

Embedding load_embedding(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("embedding: missing header line");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_fields(line);
  if (header.size() != 2) {
    throw FormatError("embedding: malformed header \"" + line + "\", expected \"<count> <dim>\"");
  }
  long long count = 0;
  long long dim = 0;
  try {
    count = parse_int(header[0]);
    dim = parse_int(header[1]);
  } catch (const FormatError&) {
    throw FormatError("embedding: malformed header \"" + line + "\"");
  }
  if (count < 0 || dim <= 0) throw FormatError("embedding: malformed header \"" + line + "\"");

  std::vector<std::string> words;
  std::vector<double> data;
  words.reserve(static_cast<std::size_t>(count));
  data.reserve(static_cast<std::size_t>(count * dim));
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (static_cast<long long>(words.size()) == count) {
      throw FormatError("embedding: more rows than the header count " + std::to_string(count));
    }
    if (static_cast<long long>(fields.size()) != dim + 1) {
      throw FormatError("embedding: line " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size() - 1) + " values, expected " +
                        std::to_string(dim));
    }
    words.emplace_back(fields[0]);
    for (std::size_t d = 1; d < fields.size(); ++d) {
      double v = 0.0;
      try {
        v = parse_double(fields[d]);
      } catch (const FormatError&) {
        throw FormatError("embedding: line " + std::to_string(line_no) + ": bad value \"" +
                          std::string(fields[d]) + "\"");
      }
      if (!std::isfinite(v)) {
        throw FormatError("embedding: line " + std::to_string(line_no) + ": non-finite value");
      }
      data.push_back(v);
    }
  }
  if (static_cast<long long>(words.size()) != count) {
    throw FormatError("embedding: header announces " + std::to_string(count) + " rows, found " +
                      std::to_string(words.size()));
  }
  return Embedding(std::move(words), std::move(data), static_cast<std::size_t>(dim));
}

Embedding load_embedding_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embedding file " + path);
  return load_embedding(in);
}

void save_embedding(const Embedding& e, std::ostream& out) {
  out << e.size() << ' ' << e.dim() << '\n';
  for (std::size_t i = 0; i < e.size(); ++i) {
    out << e.word(i);
    for (double v : e.row(i)) out << ' ' << format_double(v);
    out << '\n';
  }
  if (!out) throw Error("failed to write embedding");
}

double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw DegenerateInputError("cosine of a zero-norm vector");
  const double c = dot(a, b) / (na * nb);
  return std::clamp(c, -1.0, 1.0);
}

double cosine(const Embedding& e, std::string_view x, std::string_view y) {
  const auto vx = e.vector_of(x);
  const auto vy = e.vector_of(y);
  return cosine(vx, vy);
}

std::vector<Neighbor> nearest_neighbors(const Embedding& e, std::string_view query,
                                        std::size_t k,
                                        const std::unordered_set<std::string>& exclude) {
  if (k == 0) throw InvalidArgument("nearest_neighbors: k must be at least 1");
  const auto q = e.vector_of(query);
  const double qn = norm(q);
  if (qn == 0.0) throw DegenerateInputError("nearest_neighbors: query has zero norm");

  std::unordered_set<std::string> skip;
  for (const auto& w : exclude) skip.insert(to_lower(w));
  for (const auto& tok : split_spaces(query)) skip.insert(to_lower(tok));

  std::vector<Neighbor> scored;
  scored.reserve(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (skip.contains(to_lower(e.word(i)))) continue;
    const auto r = e.row(i);
    const double rn = norm(r);
    if (rn == 0.0) continue;
    scored.push_back({e.word(i), dot(q, r) / (qn * rn)});
  }
  const std::size_t take = std::min(k, scored.size());
  std::stable_sort(scored.begin(), scored.end(),
                   [](const Neighbor& a, const Neighbor& b) { return a.cosine > b.cosine; });
  scored.resize(take);
  return scored;
}

}  // namespace wordbias
