#pragma once

#include <array>
#include <cctype>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lexsim/corpus.hpp"
#include "lexsim/errors.hpp"
#include "lexsim/morphy.hpp"

namespace lexsim {

enum class Relation { hypernym, hyponym, meronym, holonym, antonym, also_see, similar_to };

inline Relation inverse_relation(Relation rel) {
  switch (rel) {
    case Relation::hypernym: return Relation::hyponym;
    case Relation::hyponym: return Relation::hypernym;
    case Relation::meronym: return Relation::holonym;
    case Relation::holonym: return Relation::meronym;
    default: return rel;  // horizontal relations are symmetric
  }
}

struct Synset {
  int id = 0;
  Pos pos = Pos::noun;
  std::vector<std::string> lemmas;
  std::vector<std::pair<Relation, int>> edges;
  int depth = 0;  // >= 1; parentless synsets sit directly under the pos root
};

// Immutable taxonomy: synsets with typed edges, a (lemma, pos) index, and
// per-synset depths under one virtual root per part of speech (the virtual
// root itself is not stored; it has depth 0 and adopts every parentless
// synset).
class SynsetGraph {
 public:
  std::size_t size() const { return synsets_.size(); }
  const Synset& synset(int id) const { return synsets_[static_cast<std::size_t>(id)]; }
  const std::vector<Synset>& synsets() const { return synsets_; }

  const std::vector<int>& find(std::string_view lemma, Pos pos) const {
    static const std::vector<int> none;
    auto it = lemma_index_.find(std::string(lemma));
    if (it == lemma_index_.end()) return none;
    return it->second[detail::pos_slot(pos)];
  }
  bool has_lemma(std::string_view lemma, Pos pos) const { return !find(lemma, pos).empty(); }
  bool has_lemma(std::string_view lemma) const {
    return lemma_index_.find(std::string(lemma)) != lemma_index_.end();
  }
  std::vector<int> find_all_pos(std::string_view lemma) const {
    std::vector<int> ids;
    auto it = lemma_index_.find(std::string(lemma));
    if (it == lemma_index_.end()) return ids;
    for (const auto& per_pos : it->second) ids.insert(ids.end(), per_pos.begin(), per_pos.end());
    return ids;
  }
  const std::unordered_map<std::string, std::array<std::vector<int>, 4>>& lemma_index() const {
    return lemma_index_;
  }

  // Hypernym closure including the synset itself, deduplicated.
  std::vector<int> ancestors_with_self(int id) const {
    std::vector<int> out;
    std::vector<char> seen(synsets_.size(), 0);
    std::deque<int> queue{id};
    seen[static_cast<std::size_t>(id)] = 1;
    while (!queue.empty()) {
      const int cur = queue.front();
      queue.pop_front();
      out.push_back(cur);
      for (const auto& [rel, dst] : synsets_[static_cast<std::size_t>(cur)].edges) {
        if (rel != Relation::hypernym) continue;
        if (!seen[static_cast<std::size_t>(dst)]) {
          seen[static_cast<std::size_t>(dst)] = 1;
          queue.push_back(dst);
        }
      }
    }
    return out;
  }

 private:
  friend class SynsetGraphBuilder;
  std::vector<Synset> synsets_;
  std::unordered_map<std::string, std::array<std::vector<int>, 4>> lemma_index_;
};

class SynsetGraphBuilder {
 public:
  int add_synset(Pos pos, std::vector<std::string> lemmas) {
    Synset synset;
    synset.id = static_cast<int>(synsets_.size());
    synset.pos = pos;
    synset.lemmas = std::move(lemmas);
    synsets_.push_back(std::move(synset));
    return synsets_.back().id;
  }

  // Inserts the inverse edge as well, so hypernym/hyponym and meronym/holonym
  // stay mutually inverse and horizontal links stay symmetric.
  void add_edge(int src, Relation rel, int dst) {
    edges_.insert({src, dst, rel});
    edges_.insert({dst, src, inverse_relation(rel)});
  }

  std::size_t synset_count() const { return synsets_.size(); }

  SynsetGraph build() {
    SynsetGraph graph;
    for (const auto& [src, dst, rel] : edges_) {
      if ((rel == Relation::hypernym || rel == Relation::hyponym) &&
          synsets_[static_cast<std::size_t>(src)].pos != synsets_[static_cast<std::size_t>(dst)].pos)
        throw MalformedDatabase("hypernym edge crosses part-of-speech boundaries");
      synsets_[static_cast<std::size_t>(src)].edges.emplace_back(rel, dst);
    }
    compute_depths();
    graph.synsets_ = std::move(synsets_);
    for (const auto& synset : graph.synsets_)
      for (const auto& lemma : synset.lemmas)
        graph.lemma_index_[lowercase(lemma)][detail::pos_slot(synset.pos)].push_back(synset.id);
    return graph;
  }

  static std::string lowercase(std::string_view s) {
    std::string out(s);
    for (char& c : out)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
  }

 private:
  void compute_depths() {
    std::deque<int> queue;
    for (auto& synset : synsets_) {
      bool has_parent = false;
      for (const auto& [rel, dst] : synset.edges) {
        (void)dst;
        if (rel == Relation::hypernym) {
          has_parent = true;
          break;
        }
      }
      if (!has_parent) {
        synset.depth = 1;
        queue.push_back(synset.id);
      }
    }
    while (!queue.empty()) {
      const int cur = queue.front();
      queue.pop_front();
      for (const auto& [rel, dst] : synsets_[static_cast<std::size_t>(cur)].edges) {
        if (rel != Relation::hyponym) continue;
        auto& child = synsets_[static_cast<std::size_t>(dst)];
        if (child.depth == 0) {
          child.depth = synsets_[static_cast<std::size_t>(cur)].depth + 1;
          queue.push_back(dst);
        }
      }
    }
    for (const auto& synset : synsets_)
      if (synset.depth == 0)
        throw MalformedDatabase("synset unreachable from its part-of-speech root (hypernym cycle?): id " +
                                std::to_string(synset.id));
  }

  std::vector<Synset> synsets_;
  std::set<std::tuple<int, int, Relation>> edges_;
};

namespace wndb {

inline std::optional<Pos> pos_from_char(char c) {
  switch (c) {
    case 'n': return Pos::noun;
    case 'v': return Pos::verb;
    case 'a':
    case 's': return Pos::adj;  // satellites live in the adjective files
    case 'r': return Pos::adv;
    default: return std::nullopt;
  }
}

inline std::optional<Relation> relation_from_symbol(std::string_view symbol) {
  if (symbol == "@" || symbol == "@i") return Relation::hypernym;
  if (symbol == "~" || symbol == "~i") return Relation::hyponym;
  if (symbol == "%m" || symbol == "%s" || symbol == "%p") return Relation::meronym;
  if (symbol == "#m" || symbol == "#s" || symbol == "#p") return Relation::holonym;
  if (symbol == "!") return Relation::antonym;
  if (symbol == "^") return Relation::also_see;
  if (symbol == "&") return Relation::similar_to;
  return std::nullopt;  // attributes, domains, derivations etc. are not modeled
}

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

inline bool all_hex(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isxdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

struct DataRecord {
  long offset = 0;
  Pos pos = Pos::noun;   // file pos ('s' collapsed to adj)
  char pos_char = 'n';   // file pos char used for pointer resolution
  std::vector<std::string> words;
  struct Pointer {
    Relation relation;
    long offset;
    char pos_char;
  };
  std::vector<Pointer> pointers;
  std::string source_file;
  std::size_t source_line = 0;
};

// One record line of a data.pos file. Strict about the structured fields,
// indifferent to the gloss.
inline DataRecord parse_data_line(const std::string& line, char file_pos,
                                  const std::string& file, std::size_t lineno) {
  std::istringstream in(line);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) {
    tokens.push_back(tok);
    if (tok == "|") break;  // gloss follows; leave it unparsed
  }
  auto fail = [&](const std::string& what) -> DataRecord {
    throw MalformedDatabase(file, lineno, what);
  };

  std::size_t i = 0;
  auto next = [&](const char* what) -> const std::string& {
    if (i >= tokens.size() || tokens[i] == "|")
      throw MalformedDatabase(file, lineno, std::string("truncated record, expected ") + what);
    return tokens[i++];
  };

  DataRecord record;
  record.source_file = file;
  record.source_line = lineno;

  const std::string& offset = next("synset offset");
  if (!all_digits(offset)) return fail("bad synset offset: " + offset);
  record.offset = std::stol(offset);

  if (!all_digits(next("lex_filenum"))) return fail("bad lex_filenum");

  const std::string& ss_type = next("ss_type");
  auto pos = ss_type.size() == 1 ? pos_from_char(ss_type[0]) : std::nullopt;
  if (!pos) return fail("bad ss_type: " + ss_type);
  record.pos = *pos;
  record.pos_char = file_pos;

  const std::string& w_cnt_tok = next("word count");
  if (!all_hex(w_cnt_tok)) return fail("bad word count: " + w_cnt_tok);
  const long w_cnt = std::stol(w_cnt_tok, nullptr, 16);
  if (w_cnt < 1) return fail("record declares no words");
  for (long w = 0; w < w_cnt; ++w) {
    record.words.push_back(next("word"));
    if (!all_hex(next("lex_id"))) return fail("bad lex_id");
  }

  const std::string& p_cnt_tok = next("pointer count");
  if (!all_digits(p_cnt_tok)) return fail("bad pointer count: " + p_cnt_tok);
  const long p_cnt = std::stol(p_cnt_tok);
  for (long p = 0; p < p_cnt; ++p) {
    const std::string symbol = next("pointer symbol");
    const std::string& target = next("pointer offset");
    if (!all_digits(target)) return fail("bad pointer offset: " + target);
    const std::string& pos_tok = next("pointer pos");
    if (pos_tok.size() != 1 || !pos_from_char(pos_tok[0])) return fail("bad pointer pos: " + pos_tok);
    const std::string& st = next("pointer source/target");
    if (st.size() != 4 || !all_hex(st)) return fail("bad pointer source/target: " + st);
    if (auto rel = relation_from_symbol(symbol))
      record.pointers.push_back({*rel, std::stol(target), pos_tok[0] == 's' ? 'a' : pos_tok[0]});
  }

  if (file_pos == 'v') {  // verb frames: f_cnt then "+ f_num w_num" triples
    const std::string& f_cnt_tok = next("frame count");
    if (!all_digits(f_cnt_tok)) return fail("bad frame count: " + f_cnt_tok);
    const long f_cnt = std::stol(f_cnt_tok);
    for (long f = 0; f < f_cnt; ++f) {
      if (next("frame marker") != "+") return fail("bad frame marker");
      if (!all_digits(next("frame number"))) return fail("bad frame number");
      if (!all_hex(next("frame word number"))) return fail("bad frame word number");
    }
  }

  if (i < tokens.size() && tokens[i] != "|")
    return fail("unexpected trailing token: " + tokens[i]);
  return record;
}

}  // namespace wndb

// Reads a WordNet 3.x database directory: data.noun/index.noun and
// data.verb/index.verb are required, adjective and adverb files are loaded
// when present. Copyright header lines (leading space) are skipped.
inline SynsetGraph load_wordnet(const std::filesystem::path& dir) {
  struct PosFile {
    const char* suffix;
    char pos_char;
    bool required;
  };
  static constexpr PosFile kFiles[] = {
      {"noun", 'n', true}, {"verb", 'v', true}, {"adj", 'a', false}, {"adv", 'r', false}};

  std::vector<wndb::DataRecord> records;
  std::map<std::pair<char, long>, int> by_offset;  // (pos char, offset) -> record index

  for (const auto& file : kFiles) {
    const auto data_path = dir / (std::string("data.") + file.suffix);
    std::ifstream in(data_path);
    if (!in) {
      if (file.required) throw MissingPosFile("missing required database file: " + data_path.string());
      continue;
    }
    const std::string name = data_path.filename().string();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == ' ') continue;  // license header
      auto record = wndb::parse_data_line(line, file.pos_char, name, lineno);
      auto [it, inserted] =
          by_offset.emplace(std::make_pair(file.pos_char, record.offset), static_cast<int>(records.size()));
      if (!inserted) throw MalformedDatabase(name, lineno, "duplicate synset offset");
      records.push_back(std::move(record));
    }
  }

  SynsetGraphBuilder builder;
  for (const auto& record : records) builder.add_synset(record.pos, record.words);
  for (std::size_t src = 0; src < records.size(); ++src) {
    for (const auto& pointer : records[src].pointers) {
      auto it = by_offset.find({pointer.pos_char, pointer.offset});
      if (it == by_offset.end())
        throw MalformedDatabase(records[src].source_file, records[src].source_line,
                                "dangling pointer to offset " + std::to_string(pointer.offset));
      builder.add_edge(static_cast<int>(src), pointer.relation, it->second);
    }
  }

  // Index files cross-check lemma coverage; every listed offset must resolve.
  for (const auto& file : kFiles) {
    const auto index_path = dir / (std::string("index.") + file.suffix);
    std::ifstream in(index_path);
    if (!in) {
      if (file.required) throw MissingPosFile("missing required database file: " + index_path.string());
      continue;
    }
    const std::string name = index_path.filename().string();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == ' ') continue;
      std::istringstream parts(line);
      std::string lemma, pos_tok, cnt_tok;
      if (!(parts >> lemma >> pos_tok >> cnt_tok) || !wndb::all_digits(cnt_tok))
        throw MalformedDatabase(name, lineno, "bad index record");
      const long synset_cnt = std::stol(cnt_tok);
      std::string p_cnt_tok;
      if (!(parts >> p_cnt_tok) || !wndb::all_digits(p_cnt_tok))
        throw MalformedDatabase(name, lineno, "bad index pointer count");
      std::string skip;
      for (long p = std::stol(p_cnt_tok); p > 0; --p)
        if (!(parts >> skip)) throw MalformedDatabase(name, lineno, "truncated index record");
      if (!(parts >> skip >> skip)) throw MalformedDatabase(name, lineno, "truncated index record");
      for (long s = 0; s < synset_cnt; ++s) {
        std::string offset_tok;
        if (!(parts >> offset_tok) || !wndb::all_digits(offset_tok))
          throw MalformedDatabase(name, lineno, "bad index offset");
        if (by_offset.find({file.pos_char, std::stol(offset_tok)}) == by_offset.end())
          throw MalformedDatabase(name, lineno, "index references unknown offset " + offset_tok);
      }
    }
  }

  return builder.build();
}

// Mini-taxonomy fixture format, one synset per line:
//   <id> <pos> <lemma[,lemma...]> [rel:id[,rel:id...]]
// with rel one of hyper/hypo/mero/holo/ant/also/sim. '#' starts a comment.
inline SynsetGraph load_mini_taxonomy(std::istream& in) {
  struct Row {
    std::string id;
    Pos pos;
    std::vector<std::string> lemmas;
    std::vector<std::pair<std::string, std::string>> edges;  // rel name, target id
  };
  std::vector<Row> rows;
  std::unordered_map<std::string, int> ids;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream parts(line);
    Row row;
    std::string pos_tok, lemma_field, edge_field;
    if (!(parts >> row.id)) continue;  // blank line
    if (!(parts >> pos_tok >> lemma_field))
      throw MalformedDatabase("mini-taxonomy", lineno, "expected: id pos lemmas [edges]");
    auto pos = pos_tok.size() == 1 ? wndb::pos_from_char(pos_tok[0]) : std::nullopt;
    if (!pos) throw MalformedDatabase("mini-taxonomy", lineno, "bad pos: " + pos_tok);
    row.pos = *pos;

    std::istringstream lemmas(lemma_field);
    std::string item;
    while (std::getline(lemmas, item, ','))
      if (!item.empty()) row.lemmas.push_back(item);
    if (row.lemmas.empty()) throw MalformedDatabase("mini-taxonomy", lineno, "synset without lemmas");

    if (parts >> edge_field) {
      std::istringstream edges(edge_field);
      while (std::getline(edges, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
          throw MalformedDatabase("mini-taxonomy", lineno, "bad edge: " + item);
        row.edges.emplace_back(item.substr(0, colon), item.substr(colon + 1));
      }
      std::string trailing;
      if (parts >> trailing)
        throw MalformedDatabase("mini-taxonomy", lineno, "unexpected trailing field: " + trailing);
    }
    if (ids.count(row.id)) throw MalformedDatabase("mini-taxonomy", lineno, "duplicate id: " + row.id);
    ids.emplace(row.id, static_cast<int>(rows.size()));
    rows.push_back(std::move(row));
  }

  SynsetGraphBuilder builder;
  for (const auto& row : rows) builder.add_synset(row.pos, row.lemmas);
  static const std::unordered_map<std::string, Relation> kRelations = {
      {"hyper", Relation::hypernym}, {"hypo", Relation::hyponym}, {"mero", Relation::meronym},
      {"holo", Relation::holonym},   {"ant", Relation::antonym}, {"also", Relation::also_see},
      {"sim", Relation::similar_to}};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [rel_name, target] : rows[i].edges) {
      auto rel = kRelations.find(rel_name);
      if (rel == kRelations.end())
        throw MalformedDatabase("mini-taxonomy: unknown relation " + rel_name);
      auto dst = ids.find(target);
      if (dst == ids.end())
        throw MalformedDatabase("mini-taxonomy: edge to undefined synset " + target);
      builder.add_edge(static_cast<int>(i), rel->second, dst->second);
    }
  }
  return builder.build();
}

inline SynsetGraph load_mini_taxonomy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mini-taxonomy file: " + path.string());
  return load_mini_taxonomy(in);
}

// Morphy data backed by this taxonomy's lemma index plus the directory's
// exception files (when given).
inline MorphyData make_morphy_data(const SynsetGraph& graph,
                                   const std::optional<std::filesystem::path>& dir = std::nullopt) {
  MorphyData data;
  static constexpr Pos kAll[] = {Pos::noun, Pos::verb, Pos::adj, Pos::adv};
  for (const auto& [lemma, per_pos] : graph.lemma_index())
    for (Pos pos : kAll)
      if (!per_pos[detail::pos_slot(pos)].empty()) data.add_lemma(pos, lemma);
  if (dir) load_exception_files(*dir, data);
  return data;
}

}  // namespace lexsim
