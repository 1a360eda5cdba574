#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lexsim/corpus.hpp"
#include "lexsim/errors.hpp"

namespace lexsim {

namespace detail {

inline std::size_t pos_slot(Pos pos) {
  switch (pos) {
    case Pos::noun: return 0;
    case Pos::verb: return 1;
    case Pos::adj: return 2;
    case Pos::adv: return 3;
    default: return 4;
  }
}

struct DetachmentRule {
  std::string_view suffix;
  std::string_view replacement;
};

// WordNet-style detachment tables. Order matters: the first candidate that
// validates against the lemma index wins.
inline const std::vector<DetachmentRule>& detachment_rules(Pos pos) {
  static const std::vector<DetachmentRule> noun_rules = {
      {"s", ""},     {"ses", "s"}, {"xes", "x"},  {"zes", "z"},
      {"ches", "ch"}, {"shes", "sh"}, {"men", "man"}, {"ies", "y"},
  };
  static const std::vector<DetachmentRule> verb_rules = {
      {"s", ""},  {"ies", "y"}, {"es", "e"}, {"es", ""},
      {"ed", "e"}, {"ed", ""},  {"ing", "e"}, {"ing", ""},
  };
  static const std::vector<DetachmentRule> adj_rules = {
      {"er", ""}, {"est", ""}, {"er", "e"}, {"est", "e"},
  };
  static const std::vector<DetachmentRule> no_rules;
  switch (pos) {
    case Pos::noun: return noun_rules;
    case Pos::verb: return verb_rules;
    case Pos::adj: return adj_rules;
    default: return no_rules;
  }
}

}  // namespace detail

// Exception lists plus the lemma membership index, per part of speech.
struct MorphyData {
  std::array<std::unordered_map<std::string, std::vector<std::string>>, 4> exceptions;
  std::array<std::unordered_set<std::string>, 4> lemmas;

  void add_exception(Pos pos, std::string inflected, std::vector<std::string> targets) {
    exceptions[detail::pos_slot(pos)].emplace(std::move(inflected), std::move(targets));
  }
  void add_lemma(Pos pos, std::string lemma) {
    lemmas[detail::pos_slot(pos)].insert(std::move(lemma));
  }
  bool has_lemma(std::string_view lemma, Pos pos) const {
    const auto& set = lemmas[detail::pos_slot(pos)];
    return set.find(std::string(lemma)) != set.end();
  }
};

// Rule-based lemmatizer: exception-list lookup first, then suffix detachment,
// keeping the first candidate present in the lemma index. Unresolvable tokens
// come back unchanged.
class Morphy {
 public:
  Morphy() = default;
  explicit Morphy(MorphyData data) : data_(std::move(data)) {}

  const MorphyData& data() const { return data_; }

  std::string lemmatize(std::string_view token, Pos pos) const {
    if (token.empty() || pos == Pos::other) return std::string(token);
    const std::size_t slot = detail::pos_slot(pos);

    auto exc = data_.exceptions[slot].find(std::string(token));
    if (exc != data_.exceptions[slot].end()) {
      for (const auto& target : exc->second)
        if (data_.has_lemma(target, pos)) return target;
    }

    for (const auto& rule : detail::detachment_rules(pos)) {
      if (token.size() <= rule.suffix.size() || !token.ends_with(rule.suffix)) continue;
      std::string candidate(token.substr(0, token.size() - rule.suffix.size()));
      candidate += rule.replacement;
      if (candidate != token && data_.has_lemma(candidate, pos)) return candidate;
    }
    return std::string(token);
  }

  // No tagger in the pipeline: try the noun route, then verbs.
  std::string lemmatize_any(std::string_view token) const {
    std::string lemma = lemmatize(token, Pos::noun);
    if (lemma != token) return lemma;
    lemma = lemmatize(token, Pos::verb);
    if (lemma != token) return lemma;
    return std::string(token);
  }

  std::vector<Sentence> lemmatize_sentences(const std::vector<Sentence>& sentences) const {
    std::vector<Sentence> out;
    out.reserve(sentences.size());
    for (const auto& sentence : sentences) {
      Sentence mapped;
      mapped.reserve(sentence.size());
      for (const auto& token : sentence) mapped.push_back(lemmatize_any(token));
      out.push_back(std::move(mapped));
    }
    return out;
  }

 private:
  MorphyData data_;
};

// Loads {noun,verb,adj,adv}.exc files from a WordNet database directory into
// an existing MorphyData. Missing files are fine; many databases ship fewer.
inline void load_exception_files(const std::filesystem::path& dir, MorphyData& data) {
  static constexpr std::pair<const char*, Pos> kFiles[] = {
      {"noun.exc", Pos::noun}, {"verb.exc", Pos::verb}, {"adj.exc", Pos::adj}, {"adv.exc", Pos::adv}};
  for (const auto& [name, pos] : kFiles) {
    std::ifstream in(dir / name);
    if (!in) continue;
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream parts(line);
      std::string inflected;
      if (!(parts >> inflected)) continue;
      std::vector<std::string> targets;
      std::string target;
      while (parts >> target) targets.push_back(target);
      if (!targets.empty()) data.add_exception(pos, std::move(inflected), std::move(targets));
    }
  }
}

}  // namespace lexsim
