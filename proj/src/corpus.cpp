#include "wordbias/corpus.hpp"

#include <fstream>

#include <json.hpp>

#include "wordbias/common.hpp"

namespace wordbias {

const char* to_string(HateLabel label) {
  return label == HateLabel::kHate ? "HS" : "NON_HS";
}

HateLabel parse_hate_label(const std::string& s) {
  if (s == "HS") return HateLabel::kHate;
  if (s == "NON_HS") return HateLabel::kNonHate;
  throw FormatError("unknown hate label \"" + s + "\" (expected HS or NON_HS)");
}

LabeledCorpus load_corpus(std::istream& in) {
  LabeledCorpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = "corpus line " + std::to_string(line_no) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw FormatError(where + "invalid JSON");
    }
    if (!j.is_object() || !j.contains("tokens") || !j.contains("hate") || !j.contains("group")) {
      throw FormatError(where + "expected keys tokens, hate, group");
    }
    LabeledDocument doc;
    try {
      for (const auto& t : j.at("tokens")) doc.tokens.push_back(to_lower(t.get<std::string>()));
      doc.hate = parse_hate_label(j.at("hate").get<std::string>());
      doc.group = j.at("group").get<std::string>();
    } catch (const nlohmann::json::exception&) {
      throw FormatError(where + "fields have the wrong types");
    } catch (const FormatError& ex) {
      throw FormatError(where + ex.what());
    }
    if (doc.tokens.empty()) throw FormatError(where + "document has no tokens");
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

LabeledCorpus load_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file " + path);
  return load_corpus(in);
}

void save_corpus(const LabeledCorpus& corpus, std::ostream& out) {
  for (const auto& doc : corpus) {
    nlohmann::ordered_json j;
    j["tokens"] = doc.tokens;
    j["hate"] = to_string(doc.hate);
    j["group"] = doc.group;
    out << j.dump() << '\n';
  }
  if (!out) throw Error("failed to write corpus");
}

std::vector<std::vector<std::string>> load_sentences(std::istream& in) {
  std::vector<std::vector<std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> tokens;
    for (auto& t : split_spaces(line)) {
      if (!t.empty()) tokens.push_back(to_lower(t));
    }
    out.push_back(std::move(tokens));
  }
  return out;
}

void save_sentences(const std::vector<std::vector<std::string>>& sentences, std::ostream& out) {
  for (const auto& s : sentences) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) out << ' ';
      out << s[i];
    }
    out << '\n';
  }
  if (!out) throw Error("failed to write sentences");
}

}  // namespace wordbias
