#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lexsim/errors.hpp"

namespace lexsim {

enum class Pos { noun, verb, adj, adv, other };

struct Token {
  std::string surface;
  std::string lemma;  // equals normalized surface when lemmatization is off
  Pos pos_hint = Pos::noun;
};

struct CorpusStats {
  std::uint64_t token_count = 0;
  std::uint64_t sentence_count = 0;
  std::uint64_t distinct_lemmas = 0;
};

// A sentence is one window-bounding unit: context windows never cross it.
using Sentence = std::vector<std::string>;

struct TokenizerOptions {
  bool lowercase = true;
};

namespace detail {

inline bool is_ascii_letter(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Any byte of a multi-byte UTF-8 sequence counts as a word character so
// non-ASCII words survive intact.
inline bool is_word_char(unsigned char c) { return is_ascii_letter(c) || c >= 0x80; }

inline bool is_sentence_end(unsigned char c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace detail

// Splits text into sentences of word tokens. Tokens are maximal runs of
// letters plus internal hyphens/apostrophes; digits and punctuation are
// dropped; '.', '!' and '?' close the current sentence.
inline std::vector<Sentence> tokenize(std::string_view text, TokenizerOptions options = {}) {
  std::vector<Sentence> sentences;
  Sentence sentence;
  std::string token;

  auto flush_token = [&] {
    if (!token.empty()) {
      sentence.push_back(std::move(token));
      token.clear();
    }
  };
  auto flush_sentence = [&] {
    flush_token();
    if (!sentence.empty()) {
      sentences.push_back(std::move(sentence));
      sentence.clear();
    }
  };

  const std::size_t size = text.size();
  for (std::size_t i = 0; i < size; ++i) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (detail::is_word_char(c)) {
      token.push_back(options.lowercase && c >= 'A' && c <= 'Z'
                          ? static_cast<char>(c - 'A' + 'a')
                          : static_cast<char>(c));
    } else if ((c == '-' || c == '\'') && !token.empty() && i + 1 < size &&
               detail::is_word_char(static_cast<unsigned char>(text[i + 1]))) {
      token.push_back(static_cast<char>(c));
    } else if (detail::is_sentence_end(c)) {
      flush_sentence();
    } else {
      flush_token();
    }
  }
  flush_sentence();
  return sentences;
}

class Vocabulary {
 public:
  struct Entry {
    std::string word;
    std::uint64_t frequency;
  };

  Vocabulary() = default;

  // Entries must already satisfy the ordering contract (frequency descending,
  // ties lexicographic). build_vocabulary is the usual constructor path.
  explicit Vocabulary(std::vector<Entry> entries) : entries_(std::move(entries)) {
    index_.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) index_.emplace(entries_[i].word, i);
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool contains(std::string_view word) const {
    return index_.find(std::string(word)) != index_.end();
  }
  // Position of word, or size() when absent.
  std::size_t id(std::string_view word) const {
    auto it = index_.find(std::string(word));
    return it == index_.end() ? entries_.size() : it->second;
  }
  const std::string& word(std::size_t i) const { return entries_[i].word; }
  std::uint64_t frequency(std::size_t i) const { return entries_[i].frequency; }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

template <typename SentenceRange>
Vocabulary build_vocabulary(const SentenceRange& sentences, std::uint64_t min_count) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& sentence : sentences)
    for (const auto& word : sentence) ++counts[word];

  std::vector<Vocabulary::Entry> entries;
  entries.reserve(counts.size());
  for (auto& [word, count] : counts)
    if (count >= min_count) entries.push_back({word, count});
  if (entries.empty()) throw EmptyVocabulary("no word reaches min_count=" + std::to_string(min_count));

  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.word < b.word;
  });
  return Vocabulary(std::move(entries));
}

inline CorpusStats corpus_stats(const std::vector<Sentence>& sentences) {
  CorpusStats stats;
  std::unordered_set<std::string> distinct;
  stats.sentence_count = sentences.size();
  for (const auto& sentence : sentences) {
    stats.token_count += sentence.size();
    distinct.insert(sentence.begin(), sentence.end());
  }
  stats.distinct_lemmas = distinct.size();
  return stats;
}

// One sentence per line, tokens space-separated: the trained-model input
// format and the prepare command's output format.
inline void write_sentences(std::ostream& out, const std::vector<Sentence>& sentences) {
  for (const auto& sentence : sentences) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      if (i) out << ' ';
      out << sentence[i];
    }
    out << '\n';
  }
}

inline std::vector<Sentence> read_sentences(std::istream& in) {
  std::vector<Sentence> sentences;
  std::string line;
  while (std::getline(in, line)) {
    Sentence sentence;
    std::istringstream parts(line);
    std::string word;
    while (parts >> word) sentence.push_back(word);
    if (!sentence.empty()) sentences.push_back(std::move(sentence));
  }
  return sentences;
}

inline std::vector<Sentence> read_sentence_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path.string());
  return read_sentences(in);
}

namespace detail {

inline bool valid_utf8(std::string_view bytes) {
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const unsigned char c = static_cast<unsigned char>(bytes[i]);
    std::size_t len;
    if (c < 0x80)
      len = 1;
    else if ((c & 0xE0) == 0xC0)
      len = 2;
    else if ((c & 0xF0) == 0xE0)
      len = 3;
    else if ((c & 0xF8) == 0xF0)
      len = 4;
    else
      return false;
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k)
      if ((static_cast<unsigned char>(bytes[i + k]) & 0xC0) != 0x80) return false;
    if (len == 2 && c < 0xC2) return false;  // overlong
    i += len;
  }
  return true;
}

}  // namespace detail

// Reads a whole document; invalid byte sequences are rejected here so the
// tokenizer only ever sees valid text.
inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open input file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string text = std::move(buffer).str();
  if (!detail::valid_utf8(text)) throw IoError("invalid UTF-8 in input file: " + path.string());
  return text;
}

}  // namespace lexsim
