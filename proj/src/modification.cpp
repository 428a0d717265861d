#include "wordbias/modification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

namespace wordbias {

const char* to_string(BiasMode mode) { return mode == BiasMode::kDebias ? "debias" : "overbias"; }

BiasMode parse_bias_mode(const std::string& s) {
  if (s == "debias") return BiasMode::kDebias;
  if (s == "overbias") return BiasMode::kOverbias;
  throw InvalidArgument("unknown mode \"" + s + "\" (expected debias or overbias)");
}

const char* to_string(SentenceClass c) {
  switch (c) {
    case SentenceClass::kStereo: return "stereo";
    case SentenceClass::kAnti: return "anti";
    case SentenceClass::kBoth: return "both";
    case SentenceClass::kNeutral: return "neutral";
  }
  return "neutral";
}

ExpansionResult expand_word_sets(const WordSetQuad& quad, const Embedding& aux, std::size_t k) {
  if (k == 0) throw InvalidArgument("expand_word_sets: k must be at least 1");
  ExpansionResult result;
  result.quad = quad;
  result.quad.normalize();

  std::unordered_set<std::string> taken;
  for (const auto* set : {&result.quad.t1, &result.quad.t2, &result.quad.a1, &result.quad.a2}) {
    taken.insert(set->begin(), set->end());
  }

  // Copy the originals first; the sets grow while we scan.
  const WordSetQuad originals = result.quad;
  const std::pair<const std::vector<std::string>*, std::vector<std::string>*> scan[] = {
      {&originals.t1, &result.quad.t1},
      {&originals.t2, &result.quad.t2},
      {&originals.a1, &result.quad.a1},
      {&originals.a2, &result.quad.a2}};
  for (const auto& [seeds, target] : scan) {
    for (const auto& w : *seeds) {
      if (!aux.resolves(w) || norm(aux.vector_of(w)) == 0.0) {
        result.skipped.push_back(w);
        continue;
      }
      for (const auto& nb : nearest_neighbors(aux, w, k)) {
        auto lw = to_lower(nb.word);
        if (taken.insert(lw).second) target->push_back(lw);
      }
    }
  }
  return result;
}

namespace {

bool contains_entry(const std::vector<std::string>& tokens, const std::string& entry) {
  const auto parts = split_spaces(entry);
  if (parts.empty() || parts.size() > tokens.size()) return false;
  for (std::size_t i = 0; i + parts.size() <= tokens.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < parts.size(); ++j) {
      if (tokens[i + j] != parts[j]) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

bool contains_any(const std::vector<std::string>& tokens, const std::vector<std::string>& set) {
  for (const auto& entry : set) {
    if (contains_entry(tokens, entry)) return true;
  }
  return false;
}

std::string format_grid_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  if (parse_double(buf) == v) return buf;
  return format_double(v);
}

}  // namespace

SentenceClass classify_sentence(const std::vector<std::string>& tokens, const WordSetQuad& quad) {
  const bool t1 = contains_any(tokens, quad.t1);
  const bool t2 = contains_any(tokens, quad.t2);
  const bool a1 = contains_any(tokens, quad.a1);
  const bool a2 = contains_any(tokens, quad.a2);
  const bool stereo = (t1 && a1) || (t2 && a2);
  const bool anti = (t1 && a2) || (t2 && a1);
  if (stereo && anti) return SentenceClass::kBoth;
  if (stereo) return SentenceClass::kStereo;
  if (anti) return SentenceClass::kAnti;
  return SentenceClass::kNeutral;
}

void BalanceConfig::validate() const {
  if (!(keep_probability >= 0.0 && keep_probability < 1.0)) {
    throw InvalidArgument("balance: keep probability must lie in [0, 1)");
  }
}

std::vector<std::vector<std::string>> balance_corpus(
    const std::vector<std::vector<std::string>>& sentences, const WordSetQuad& quad,
    const BalanceConfig& cfg) {
  cfg.validate();
  const SentenceClass targeted =
      cfg.mode == BiasMode::kDebias ? SentenceClass::kStereo : SentenceClass::kAnti;
  Rng rng(cfg.seed);
  std::vector<std::vector<std::string>> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) {
    const auto c = classify_sentence(s, quad);
    if (c == targeted || c == SentenceClass::kBoth) {
      if (rng.uniform() >= cfg.keep_probability) continue;
    }
    out.push_back(s);
  }
  return out;
}

PairSets build_pairs(const WordSetQuad& quad, BiasMode mode) {
  auto cross = [](const std::vector<std::string>& a, const std::vector<std::string>& b,
                  std::vector<WordPair>& out) {
    for (const auto& x : a) {
      for (const auto& y : b) out.emplace_back(x, y);
    }
  };
  PairSets p;
  cross(quad.t1, quad.a2, p.synonyms);
  cross(quad.t2, quad.a1, p.synonyms);
  cross(quad.t1, quad.a1, p.antonyms);
  cross(quad.t2, quad.a2, p.antonyms);
  if (mode == BiasMode::kOverbias) std::swap(p.synonyms, p.antonyms);
  return p;
}

void AttractRepelConfig::validate() const {
  if (!(synonym_margin >= 0.0) || !(antonym_margin >= 0.0)) {
    throw InvalidArgument("attract-repel: margins must be >= 0");
  }
  if (!(regularization > 0.0)) throw InvalidArgument("attract-repel: lambda must be > 0");
  if (synonym_batch == 0 || antonym_batch == 0) {
    throw InvalidArgument("attract-repel: batch sizes must be positive");
  }
  if (!(learning_rate > 0.0)) throw InvalidArgument("attract-repel: learning rate must be > 0");
}

namespace {

using IndexPair = std::pair<std::size_t, std::size_t>;

// Multi-word entries contribute every token pair.
std::vector<IndexPair> resolve_pairs(const Embedding& e, const std::vector<WordPair>& pairs) {
  std::vector<IndexPair> out;
  for (const auto& [x, y] : pairs) {
    std::vector<std::size_t> xs, ys;
    for (const auto& tok : split_spaces(x)) {
      auto idx = e.index_of(tok);
      if (!idx) throw OovError(tok);
      xs.push_back(*idx);
    }
    for (const auto& tok : split_spaces(y)) {
      auto idx = e.index_of(tok);
      if (!idx) throw OovError(tok);
      ys.push_back(*idx);
    }
    for (auto i : xs) {
      for (auto j : ys) {
        if (i != j) out.emplace_back(i, j);
      }
    }
  }
  return out;
}

class Specializer {
 public:
  Specializer(std::vector<double> data, std::size_t dim, const AttractRepelConfig& cfg)
      : w_(std::move(data)), init_(w_), dim_(dim), cfg_(cfg) {}

  std::vector<double>& data() { return w_; }

  void step(const std::vector<IndexPair>& syn, const std::vector<IndexPair>& ant) {
    grad_.clear();
    accumulate(syn, /*attract=*/true);
    accumulate(ant, /*attract=*/false);

    std::unordered_set<std::size_t> touched;
    for (const auto* batch : {&syn, &ant}) {
      for (const auto& [l, r] : *batch) {
        touched.insert(l);
        touched.insert(r);
      }
    }
    for (const auto& [i, g] : grad_) {
      double* x = &w_[i * dim_];
      for (std::size_t d = 0; d < dim_; ++d) x[d] -= cfg_.learning_rate * g[d];
    }
    // Proximal step for lambda * |x - x_init|^2; stable for any lambda.
    const double shrink = 2.0 * cfg_.learning_rate * cfg_.regularization;
    for (std::size_t i : touched) {
      double* x = &w_[i * dim_];
      const double* x0 = &init_[i * dim_];
      for (std::size_t d = 0; d < dim_; ++d) x[d] = (x[d] + shrink * x0[d]) / (1.0 + shrink);
    }
  }

 private:
  std::span<const double> row(std::size_t i) const { return {w_.data() + i * dim_, dim_}; }

  std::vector<double>& grad(std::size_t i) {
    auto it = grad_.find(i);
    if (it == grad_.end()) it = grad_.emplace(i, std::vector<double>(dim_, 0.0)).first;
    return it->second;
  }

  void add(std::size_t target, double scale, std::size_t source) {
    auto& g = grad(target);
    const auto v = row(source);
    for (std::size_t d = 0; d < dim_; ++d) g[d] += scale * v[d];
  }

  // Hardest in-batch negative for `word`: the most similar other word when
  // attracting, the least similar when repelling. Words of the pair itself are
  // not eligible.
  std::optional<std::size_t> negative(const std::vector<IndexPair>& batch, std::size_t self,
                                      std::size_t word, std::size_t partner, bool attract) const {
    std::optional<std::size_t> best;
    double best_score = 0.0;
    for (std::size_t k = 0; k < batch.size(); ++k) {
      if (k == self) continue;
      for (std::size_t c : {batch[k].first, batch[k].second}) {
        if (c == word || c == partner) continue;
        const double s = dot(row(word), row(c));
        if (!best || (attract ? s > best_score : s < best_score)) {
          best = c;
          best_score = s;
        }
      }
    }
    return best;
  }

  void accumulate(const std::vector<IndexPair>& batch, bool attract) {
    // Negatives and dot products are taken from the vectors before this step.
    struct Term {
      std::size_t l, r, tl, tr;
    };
    std::vector<Term> terms;
    for (std::size_t k = 0; k < batch.size(); ++k) {
      const auto [l, r] = batch[k];
      auto tl = negative(batch, k, l, r, attract);
      auto tr = negative(batch, k, r, l, attract);
      if (!tl || !tr) continue;
      terms.push_back({l, r, *tl, *tr});
    }
    struct Update {
      std::size_t target;
      double scale;
      std::size_t source;
    };
    std::vector<Update> updates;
    for (const auto& t : terms) {
      const double lr_dot = dot(row(t.l), row(t.r));
      const double l_neg = dot(row(t.l), row(t.tl));
      const double r_neg = dot(row(t.r), row(t.tr));
      if (attract) {
        // max(0, d + xl.tl - xl.xr) + max(0, d + xr.tr - xl.xr)
        if (cfg_.synonym_margin + l_neg - lr_dot > 0.0) {
          updates.push_back({t.l, 1.0, t.tl});
          updates.push_back({t.l, -1.0, t.r});
          updates.push_back({t.tl, 1.0, t.l});
          updates.push_back({t.r, -1.0, t.l});
        }
        if (cfg_.synonym_margin + r_neg - lr_dot > 0.0) {
          updates.push_back({t.r, 1.0, t.tr});
          updates.push_back({t.r, -1.0, t.l});
          updates.push_back({t.tr, 1.0, t.r});
          updates.push_back({t.l, -1.0, t.r});
        }
      } else {
        // max(0, d + xl.xr - xl.tl) + max(0, d + xl.xr - xr.tr)
        if (cfg_.antonym_margin + lr_dot - l_neg > 0.0) {
          updates.push_back({t.l, 1.0, t.r});
          updates.push_back({t.l, -1.0, t.tl});
          updates.push_back({t.r, 1.0, t.l});
          updates.push_back({t.tl, -1.0, t.l});
        }
        if (cfg_.antonym_margin + lr_dot - r_neg > 0.0) {
          updates.push_back({t.l, 1.0, t.r});
          updates.push_back({t.r, 1.0, t.l});
          updates.push_back({t.r, -1.0, t.tr});
          updates.push_back({t.tr, -1.0, t.r});
        }
      }
    }
    for (const auto& u : updates) add(u.target, u.scale, u.source);
  }

  std::vector<double> w_;
  std::vector<double> init_;
  std::size_t dim_;
  AttractRepelConfig cfg_;
  std::unordered_map<std::size_t, std::vector<double>> grad_;
};

void normalize_rows(std::vector<double>& data, std::size_t dim) {
  for (std::size_t i = 0; i * dim < data.size(); ++i) {
    std::span<double> r(data.data() + i * dim, dim);
    const double n = norm(r);
    if (n == 0.0) continue;
    for (double& v : r) v /= n;
  }
}

}  // namespace

AttractRepelResult attract_repel(const Embedding& e, const std::vector<WordPair>& synonyms,
                                 const std::vector<WordPair>& antonyms,
                                 const AttractRepelConfig& cfg) {
  cfg.validate();
  auto syn = resolve_pairs(e, synonyms);
  auto ant = resolve_pairs(e, antonyms);

  std::vector<double> data = e.data();
  normalize_rows(data, e.dim());
  if (syn.empty() && ant.empty()) {
    return {e.with_data(std::move(data)), true};
  }

  Specializer spec(std::move(data), e.dim(), cfg);
  Rng rng(cfg.seed);
  const std::size_t syn_batches = (syn.size() + cfg.synonym_batch - 1) / cfg.synonym_batch;
  const std::size_t ant_batches = (ant.size() + cfg.antonym_batch - 1) / cfg.antonym_batch;
  const std::size_t batches = std::max(syn_batches, ant_batches);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(syn);
    rng.shuffle(ant);
    for (std::size_t b = 0; b < batches; ++b) {
      auto slice = [b](const std::vector<IndexPair>& all, std::size_t size) {
        const std::size_t lo = std::min(all.size(), b * size);
        const std::size_t hi = std::min(all.size(), lo + size);
        return std::vector<IndexPair>(all.begin() + static_cast<std::ptrdiff_t>(lo),
                                      all.begin() + static_cast<std::ptrdiff_t>(hi));
      };
      spec.step(slice(syn, cfg.synonym_batch), slice(ant, cfg.antonym_batch));
    }
    normalize_rows(spec.data(), e.dim());
  }
  return {e.with_data(std::move(spec.data())), false};
}

double mean_pair_cosine(const Embedding& e, const std::vector<WordPair>& pairs) {
  if (pairs.empty()) throw InvalidArgument("mean_pair_cosine: no pairs");
  double s = 0.0;
  for (const auto& [x, y] : pairs) s += cosine(e, x, y);
  return s / static_cast<double>(pairs.size());
}

std::vector<double> default_balance_grid() {
  std::vector<double> g;
  for (int i = 0; i < 10; ++i) g.push_back(i / 10.0);
  return g;
}

std::vector<AttractRepelGridPoint> default_attract_repel_grid() {
  std::vector<AttractRepelGridPoint> g;
  for (double ds : {0.0, 1.0}) {
    for (double da : {0.0, 1.0}) {
      for (double lambda : {1e-1, 5e-2, 1e-2}) g.push_back({ds, da, lambda});
    }
  }
  return g;
}

std::string balance_variant_id(BiasMode mode, double p) {
  return std::string("bal-") + to_string(mode) + "-p" + format_grid_value(p);
}

std::string attract_repel_variant_id(BiasMode mode, const AttractRepelGridPoint& point) {
  return std::string("ar-") + to_string(mode) + "-ds" + format_double(point.synonym_margin) +
         "-da" + format_double(point.antonym_margin) + "-l" + format_double(point.regularization);
}

std::vector<BalanceVariant> generate_balance_grid(
    const std::vector<std::vector<std::string>>& sentences, const WordSetQuad& quad,
    std::uint64_t seed, const std::vector<double>& grid) {
  std::vector<BalanceVariant> out;
  std::uint64_t stream = 0;
  for (BiasMode mode : {BiasMode::kDebias, BiasMode::kOverbias}) {
    for (double p : grid) {
      BalanceConfig cfg{mode, p, mix_seed(seed, stream++)};
      out.push_back({balance_variant_id(mode, p), cfg, balance_corpus(sentences, quad, cfg)});
    }
  }
  return out;
}

std::vector<EmbeddingVariant> generate_attract_repel_grid(
    const Embedding& e, const WordSetQuad& quad, std::uint64_t seed,
    const AttractRepelConfig& base, const std::vector<AttractRepelGridPoint>& grid) {
  std::vector<EmbeddingVariant> out;
  std::uint64_t stream = 1000;
  for (BiasMode mode : {BiasMode::kDebias, BiasMode::kOverbias}) {
    const auto pairs = build_pairs(quad, mode);
    for (const auto& point : grid) {
      AttractRepelConfig cfg = base;
      cfg.synonym_margin = point.synonym_margin;
      cfg.antonym_margin = point.antonym_margin;
      cfg.regularization = point.regularization;
      cfg.seed = mix_seed(seed, stream++);
      auto result = attract_repel(e, pairs.synonyms, pairs.antonyms, cfg);
      out.push_back({attract_repel_variant_id(mode, point), mode, cfg,
                     std::move(result.embedding)});
    }
  }
  return out;
}

}  // namespace wordbias
