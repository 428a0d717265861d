#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wordbias {

// Base for every error raised by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class OovError : public Error {
 public:
  explicit OovError(std::string token)
      : Error("out-of-vocabulary token: \"" + token + "\""), token_(std::move(token)) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

// Raised when a statistic is undefined for the input (zero variance, empty set).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// ASCII lowercase; bytes >= 0x80 pass through so UTF-8 stays intact.
std::string to_lower(std::string_view s);

// Splits on single spaces. Empty pieces are kept so callers can reject them.
std::vector<std::string> split_spaces(std::string_view s);

// Shortest decimal text that parses back to the identical double.
std::string format_double(double v);

// Strict full-string parse; throws FormatError.
double parse_double(std::string_view s);
long long parse_int(std::string_view s);

// Deterministic random source. Distributions are implemented here rather than
// taken from <random> so that streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n);
  double normal();

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// splitmix64 finalizer; used to derive independent sub-seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

}  // namespace wordbias
