#pragma once

// Writes WordNet 3.x-format database files from a compact description, for
// parser tests. Offsets are the caller's identifiers; the parser resolves
// them as opaque keys exactly like real byte offsets.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace testsupport {

struct WnPointer {
  std::string symbol;  // "@", "~", "!", "#p', "%p", "^", "&", ...
  long target_offset;
  char target_pos;
};

struct WnSynset {
  long offset;
  char pos;  // n v a r
  std::vector<std::string> words;
  std::vector<WnPointer> pointers;
};

inline void write_wordnet_db(const std::filesystem::path& dir,
                             const std::vector<WnSynset>& synsets,
                             const std::map<char, std::vector<std::pair<std::string, std::string>>>&
                                 exceptions = {},
                             bool include_verb_files = true) {
  std::filesystem::create_directories(dir);
  static constexpr std::pair<char, const char*> kSuffix[] = {
      {'n', "noun"}, {'v', "verb"}, {'a', "adj"}, {'r', "adv"}};

  for (const auto& [pos, suffix] : kSuffix) {
    std::vector<const WnSynset*> rows;
    for (const auto& synset : synsets)
      if (synset.pos == pos) rows.push_back(&synset);
    if (rows.empty() && !(include_verb_files && (pos == 'n' || pos == 'v'))) continue;

    std::ofstream data(dir / (std::string("data.") + suffix));
    data << "  1 This is a generated fixture database file.\n";
    char buffer[64];
    for (const WnSynset* synset : rows) {
      std::snprintf(buffer, sizeof(buffer), "%08ld 03 %c %02x", synset->offset, synset->pos,
                    static_cast<unsigned>(synset->words.size()));
      data << buffer;
      for (const auto& word : synset->words) data << ' ' << word << " 0";
      std::snprintf(buffer, sizeof(buffer), " %03d", static_cast<int>(synset->pointers.size()));
      data << buffer;
      for (const auto& pointer : synset->pointers) {
        std::snprintf(buffer, sizeof(buffer), " %s %08ld %c 0000", pointer.symbol.c_str(),
                      pointer.target_offset, pointer.target_pos);
        data << buffer;
      }
      if (pos == 'v') data << " 01 + 02 00";
      data << " | generated gloss text\n";
    }

    // index.pos: lemma pos synset_cnt p_cnt [symbols] sense_cnt tagsense_cnt offsets
    std::map<std::string, std::vector<long>> by_lemma;
    for (const WnSynset* synset : rows)
      for (const auto& word : synset->words) by_lemma[word].push_back(synset->offset);
    std::ofstream index(dir / (std::string("index.") + suffix));
    index << "  1 This is a generated fixture database file.\n";
    for (const auto& [lemma, offsets] : by_lemma) {
      index << lemma << ' ' << pos << ' ' << offsets.size() << " 0 " << offsets.size() << " 0";
      for (long offset : offsets) {
        std::snprintf(buffer, sizeof(buffer), " %08ld", offset);
        index << buffer;
      }
      index << '\n';
    }
  }

  for (const auto& [pos, pairs] : exceptions) {
    const char* suffix = pos == 'n' ? "noun" : pos == 'v' ? "verb" : pos == 'a' ? "adj" : "adv";
    std::ofstream exc(dir / (std::string(suffix) + ".exc"));
    for (const auto& [inflected, lemma] : pairs) exc << inflected << ' ' << lemma << '\n';
  }
}

}  // namespace testsupport
