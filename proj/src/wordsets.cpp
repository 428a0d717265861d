#include "wordbias/wordsets.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace wordbias {

namespace {

void lower_all(std::vector<std::string>& v) {
  for (auto& w : v) w = to_lower(w);
}

std::vector<std::string> read_list(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("word sets: missing key \"") + key + "\"");
  const auto& arr = j.at(key);
  if (!arr.is_array()) throw FormatError(std::string("word sets: \"") + key + "\" is not an array");
  std::vector<std::string> out;
  for (const auto& item : arr) {
    if (!item.is_string()) {
      throw FormatError(std::string("word sets: \"") + key + "\" contains a non-string entry");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

// Removes `count` entries chosen uniformly without replacement; survivors keep order.
std::vector<std::string> drop_random(const std::vector<std::string>& words, std::size_t count,
                                     Rng& rng) {
  std::vector<std::size_t> idx(words.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  // Partial Fisher-Yates: the first `count` slots are the removed indices.
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + rng.below(idx.size() - i);
    std::swap(idx[i], idx[j]);
  }
  std::vector<bool> removed(words.size(), false);
  for (std::size_t i = 0; i < count; ++i) removed[idx[i]] = true;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!removed[i]) out.push_back(words[i]);
  }
  return out;
}

}  // namespace

void WordSetQuad::normalize() {
  lower_all(t1);
  lower_all(t2);
  lower_all(a1);
  lower_all(a2);
}

void WordSetQuad::validate() const {
  const std::pair<const char*, const std::vector<std::string>*> sets[] = {
      {"t1", &t1}, {"t2", &t2}, {"a1", &a1}, {"a2", &a2}};
  std::unordered_map<std::string, const char*> owner;
  for (const auto& [name, set] : sets) {
    if (set->empty()) throw InvalidArgument(std::string("word set ") + name + " is empty");
    for (const auto& w : *set) {
      auto key = to_lower(w);
      auto [it, inserted] = owner.emplace(key, name);
      if (!inserted && std::string_view(it->second) != name) {
        throw InvalidArgument("word \"" + w + "\" appears in both " + it->second + " and " + name);
      }
    }
  }
}

WordSetQuad parse_wordsets_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw FormatError(std::string("word sets: invalid JSON: ") + ex.what());
  }
  if (!j.is_object()) throw FormatError("word sets: expected a JSON object");
  WordSetQuad q{read_list(j, "t1"), read_list(j, "t2"), read_list(j, "a1"), read_list(j, "a2")};
  q.normalize();
  return q;
}

WordSetQuad load_wordsets_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open word set file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_wordsets_json(ss.str());
}

std::string wordsets_to_json(const WordSetQuad& quad) {
  nlohmann::ordered_json j;
  j["t1"] = quad.t1;
  j["t2"] = quad.t2;
  j["a1"] = quad.a1;
  j["a2"] = quad.a2;
  return j.dump(2) + "\n";
}

WordSetQuad prune_weat_targets(const WordSetQuad& quad, const Embedding& e, std::uint64_t seed) {
  for (const auto* attrs : {&quad.a1, &quad.a2}) {
    for (const auto& w : *attrs) {
      for (const auto& tok : split_spaces(w)) {
        if (!e.contains(tok)) throw OovError(tok);
      }
    }
  }
  auto keep_known = [&](const std::vector<std::string>& words) {
    std::vector<std::string> out;
    for (const auto& w : words) {
      if (e.resolves(w)) out.push_back(w);
    }
    return out;
  };
  WordSetQuad out = quad;
  out.t1 = keep_known(quad.t1);
  out.t2 = keep_known(quad.t2);
  if (out.t1.empty()) throw DegenerateInputError("pruning removed every t1 word");
  if (out.t2.empty()) throw DegenerateInputError("pruning removed every t2 word");

  Rng rng(seed);
  if (out.t1.size() > out.t2.size()) {
    out.t1 = drop_random(out.t1, out.t1.size() - out.t2.size(), rng);
  } else if (out.t2.size() > out.t1.size()) {
    out.t2 = drop_random(out.t2, out.t2.size() - out.t1.size(), rng);
  }
  return out;
}

}  // namespace wordbias
