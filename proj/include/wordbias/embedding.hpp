#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wordbias/common.hpp"

namespace wordbias {

// A static word embedding: an ordered vocabulary with one dense vector per word.
// Immutable after construction, so concurrent reads are safe.
class Embedding {
 public:
  Embedding() = default;

  // Validates uniqueness, dimension and finiteness. `vectors` is row-major,
  // words.size() * dim values.
  Embedding(std::vector<std::string> words, std::vector<double> vectors, std::size_t dim);

  static Embedding from_rows(std::vector<std::string> words,
                             const std::vector<std::vector<double>>& rows, std::size_t dim);

  std::size_t size() const { return words_.size(); }
  std::size_t dim() const { return dim_; }
  bool empty() const { return words_.empty(); }

  const std::vector<std::string>& words() const { return words_; }
  const std::string& word(std::size_t i) const { return words_[i]; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  const std::vector<double>& data() const { return data_; }

  // Case-insensitive lookup. When two stored words differ only in case the
  // first one in vocabulary order wins.
  std::optional<std::size_t> index_of(std::string_view word) const;
  bool contains(std::string_view word) const { return index_of(word).has_value(); }

  // Single token -> its vector; space-separated tokens -> mean of their vectors.
  std::vector<double> vector_of(std::string_view expression) const;
  // True when every token of the expression is in the vocabulary.
  bool resolves(std::string_view expression) const;

  // Copy with every row replaced; the vocabulary is kept.
  Embedding with_data(std::vector<double> data) const;

  friend bool operator==(const Embedding& a, const Embedding& b) {
    return a.dim_ == b.dim_ && a.words_ == b.words_ && a.data_ == b.data_;
  }

 private:
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

// word2vec text format: "<count> <dim>" header then "<word> <v1> ... <vd>" rows.
Embedding load_embedding(std::istream& in);
Embedding load_embedding_file(const std::string& path);
void save_embedding(const Embedding& e, std::ostream& out);

double cosine(std::span<const double> a, std::span<const double> b);
double cosine(const Embedding& e, std::string_view x, std::string_view y);

struct Neighbor {
  std::string word;
  double cosine = 0.0;
};

// Up to k vocabulary words by descending cosine to `query`. The query's own
// tokens and every word in `exclude` (compared lowercased) are skipped; ties keep
// vocabulary order. Zero-norm vocabulary rows are never returned.
std::vector<Neighbor> nearest_neighbors(const Embedding& e, std::string_view query, std::size_t k,
                                        const std::unordered_set<std::string>& exclude = {});

}  // namespace wordbias
