#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexsim/errors.hpp"
#include "lexsim/taxonomy.hpp"

namespace lexsim {

// Maps a raw measure value into [0,1] given the measure's bounds.
inline double normalize(double x_raw, double v_min, double v_max) {
  if (v_min >= v_max) throw InvalidBounds("normalize requires v_min < v_max");
  return std::clamp((x_raw - v_min) / (v_max - v_min), 0.0, 1.0);
}

// Raw value ranges of the three measures. Jiang-Conrath is unbounded above in
// principle, so its raw values are capped and normalized against the cap.
struct SimilarityBounds {
  struct Range {
    double min;
    double max;
  };
  Range wup{0.0, 1.0};
  Range jcn{0.0, 1.0};
  Range hso{0.0, 16.0};

  static SimilarityBounds with_jcn_cap(double cap) {
    SimilarityBounds bounds;
    bounds.jcn.max = cap;
    return bounds;
  }
};

inline constexpr double kDefaultJcnCap = 1.0;

// Smoothed corpus counts and information content per synset.
struct ICTable {
  std::vector<double> values;  // ic(s) = -log(count(s) / count(pos root))
  std::vector<double> counts;  // propagated counts, kept for diagnostics
  std::array<double, 4> root_counts{0.0, 0.0, 0.0, 0.0};

  double ic(int id) const { return values[static_cast<std::size_t>(id)]; }
};

// Counts every token against every synset containing its lemma (add-one
// smoothing over all synsets), propagates counts to all hypernym ancestors,
// and converts to information content against the per-pos virtual root.
inline ICTable compute_ic(const std::vector<Sentence>& corpus, const SynsetGraph& graph) {
  const std::size_t n = graph.size();
  std::vector<double> own(n, 1.0);
  for (const auto& sentence : corpus)
    for (const auto& token : sentence)
      for (int id : graph.find_all_pos(token)) own[static_cast<std::size_t>(id)] += 1.0;

  ICTable table;
  table.counts.assign(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (int ancestor : graph.ancestors_with_self(static_cast<int>(s)))
      table.counts[static_cast<std::size_t>(ancestor)] += own[s];
    table.root_counts[detail::pos_slot(graph.synset(static_cast<int>(s)).pos)] += own[s];
  }

  table.values.assign(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    const double root = table.root_counts[detail::pos_slot(graph.synset(static_cast<int>(s)).pos)];
    table.values[s] = -std::log(table.counts[s] / root);
    if (table.values[s] < 0.0) table.values[s] = 0.0;  // guard rounding at the root
  }
  return table;
}

namespace detail {

// Deepest common hypernym ancestor of two synsets; ties broken toward the
// smaller id. Empty when only the virtual root subsumes both.
inline std::optional<int> deepest_common_ancestor(const SynsetGraph& graph, int a, int b) {
  const auto ancestors_a = graph.ancestors_with_self(a);
  std::vector<char> in_a(graph.size(), 0);
  for (int id : ancestors_a) in_a[static_cast<std::size_t>(id)] = 1;

  std::optional<int> best;
  for (int id : graph.ancestors_with_self(b)) {
    if (!in_a[static_cast<std::size_t>(id)]) continue;
    if (!best || graph.synset(id).depth > graph.synset(*best).depth ||
        (graph.synset(id).depth == graph.synset(*best).depth && id < *best))
      best = id;
  }
  return best;
}

}  // namespace detail

// Wu-Palmer similarity: best 2*depth(lcs) / (depth(a)+depth(b)) over all
// same-pos synset pairs; 0 for out-of-taxonomy lemmas. Multiple inheritance
// under min-depth can push the raw ratio past 1, so the result is clamped to
// the measure's declared [0,1] range.
inline double wup(std::string_view a, std::string_view b, const SynsetGraph& graph) {
  static constexpr Pos kPos[] = {Pos::noun, Pos::verb, Pos::adj, Pos::adv};
  double best = 0.0;
  for (Pos pos : kPos) {
    const auto& ids_a = graph.find(a, pos);
    const auto& ids_b = graph.find(b, pos);
    for (int sa : ids_a) {
      for (int sb : ids_b) {
        const auto lcs = detail::deepest_common_ancestor(graph, sa, sb);
        if (!lcs) continue;
        const double value = 2.0 * graph.synset(*lcs).depth /
                             (graph.synset(sa).depth + graph.synset(sb).depth);
        best = std::max(best, value);
      }
    }
  }
  return std::min(best, 1.0);
}

// Jiang-Conrath similarity: inverse of the IC distance ic(a)+ic(b)-2*ic(lcs),
// minimized over same-pos synset pairs, capped at `cap`. Zero distance (the
// informationally indistinguishable case) maps to the cap.
inline double jcn(std::string_view a, std::string_view b, const SynsetGraph& graph,
                  const ICTable& ic, double cap = kDefaultJcnCap) {
  static constexpr Pos kPos[] = {Pos::noun, Pos::verb, Pos::adj, Pos::adv};
  std::optional<double> min_distance;
  for (Pos pos : kPos) {
    const auto& ids_a = graph.find(a, pos);
    const auto& ids_b = graph.find(b, pos);
    for (int sa : ids_a) {
      for (int sb : ids_b) {
        const auto lcs = detail::deepest_common_ancestor(graph, sa, sb);
        const double lcs_ic = lcs ? ic.ic(*lcs) : 0.0;  // virtual root
        const double distance = ic.ic(sa) + ic.ic(sb) - 2.0 * lcs_ic;
        if (!min_distance || distance < *min_distance) min_distance = distance;
      }
    }
  }
  if (!min_distance) return 0.0;
  if (*min_distance <= 0.0) return cap;
  return std::min(cap, 1.0 / *min_distance);
}

namespace detail {

enum class HsoDirection { up, down, horizontal };

inline std::optional<HsoDirection> hso_direction(Relation rel) {
  switch (rel) {
    case Relation::hypernym:
    case Relation::meronym: return HsoDirection::up;
    case Relation::hyponym:
    case Relation::holonym: return HsoDirection::down;
    case Relation::antonym:
    case Relation::also_see:
    case Relation::similar_to: return HsoDirection::horizontal;
  }
  return std::nullopt;
}

// Admissible collapsed direction patterns: u, ud, uh, uhd, d, dh, h, hd.
// States 1..8 name those prefixes; 0 is the empty path; -1 is inadmissible.
inline int hso_transition(int state, HsoDirection dir) {
  static constexpr int kUp = 0, kDown = 1, kHoriz = 2;
  static constexpr int table[9][3] = {
      //  u   d   h
      {1, 5, 7},    // start
      {1, 2, 3},    // u
      {-1, 2, -1},  // ud
      {-1, 4, 3},   // uh
      {-1, 4, -1},  // uhd
      {-1, 5, 6},   // d
      {-1, -1, 6},  // dh
      {-1, 8, 7},   // h
      {-1, 8, -1},  // hd
  };
  const int column = dir == HsoDirection::up ? kUp : dir == HsoDirection::down ? kDown : kHoriz;
  return table[state][column];
}

inline int hso_turns(int state) {
  static constexpr int turns[9] = {0, 0, 1, 1, 2, 0, 1, 0, 1};
  return turns[state];
}

inline constexpr double kHsoStrong = 16.0;
inline constexpr int kHsoPathLimit = 5;
inline constexpr double kHsoC = 8.0;
inline constexpr double kHsoK = 1.0;

// Best medium-strong score over admissible walks of at most kHsoPathLimit
// edges from any source synset to any target synset.
inline double hso_medium_strong(const SynsetGraph& graph, const std::vector<int>& sources,
                                const std::vector<char>& is_target) {
  struct State {
    int node;
    int state;
    int length;
  };
  std::vector<char> seen(graph.size() * 9 * (kHsoPathLimit + 1), 0);
  auto seen_key = [&](int node, int state, int length) {
    return (static_cast<std::size_t>(node) * 9 + static_cast<std::size_t>(state)) *
               (kHsoPathLimit + 1) +
           static_cast<std::size_t>(length);
  };

  double best = 0.0;
  std::deque<State> queue;
  for (int source : sources) {
    if (!seen[seen_key(source, 0, 0)]) {
      seen[seen_key(source, 0, 0)] = 1;
      queue.push_back({source, 0, 0});
    }
  }
  while (!queue.empty()) {
    const State cur = queue.front();
    queue.pop_front();
    if (cur.length == kHsoPathLimit) continue;
    for (const auto& [rel, dst] : graph.synset(cur.node).edges) {
      const auto dir = hso_direction(rel);
      if (!dir) continue;
      const int next_state = hso_transition(cur.state, *dir);
      if (next_state < 0) continue;
      const int next_length = cur.length + 1;
      if (is_target[static_cast<std::size_t>(dst)]) {
        const double score = kHsoC - next_length - kHsoK * hso_turns(next_state);
        best = std::max(best, score);
      }
      if (!seen[seen_key(dst, next_state, next_length)]) {
        seen[seen_key(dst, next_state, next_length)] = 1;
        queue.push_back({dst, next_state, next_length});
      }
    }
  }
  return best;
}

inline std::vector<std::string> compound_parts(std::string_view lemma) {
  std::vector<std::string> parts;
  std::string part;
  for (char c : lemma) {
    if (c == '_' || c == '-') {
      if (!part.empty()) parts.push_back(std::move(part));
      part.clear();
    } else {
      part.push_back(c);
    }
  }
  if (!part.empty()) parts.push_back(std::move(part));
  return parts;
}

// True when b's components appear as a consecutive run inside a's components
// and a is strictly longer (a compound containing b).
inline bool compound_contains(std::string_view a, std::string_view b) {
  const auto pa = compound_parts(a);
  const auto pb = compound_parts(b);
  if (pb.empty() || pa.size() <= pb.size()) return false;
  for (std::size_t start = 0; start + pb.size() <= pa.size(); ++start) {
    bool match = true;
    for (std::size_t i = 0; i < pb.size(); ++i)
      if (pa[start + i] != pb[i]) {
        match = false;
        break;
      }
    if (match) return true;
  }
  return false;
}

}  // namespace detail

// Hirst-St-Onge relatedness. Strong relations (shared synset, a horizontal
// link, or compound containment) score 16; otherwise the best admissible path
// of at most 5 edges scores C - pathlen - k*turns with C=8, k=1. The search
// runs from both endpoints because the admissible pattern set is not closed
// under path reversal.
inline double hso(std::string_view a, std::string_view b, const SynsetGraph& graph) {
  const auto ids_a = graph.find_all_pos(a);
  const auto ids_b = graph.find_all_pos(b);
  if (ids_a.empty() || ids_b.empty()) return 0.0;

  std::vector<char> in_b(graph.size(), 0);
  for (int id : ids_b) in_b[static_cast<std::size_t>(id)] = 1;
  for (int id : ids_a)
    if (in_b[static_cast<std::size_t>(id)]) return detail::kHsoStrong;

  for (int sa : ids_a)
    for (const auto& [rel, dst] : graph.synset(sa).edges)
      if (detail::hso_direction(rel) == detail::HsoDirection::horizontal &&
          in_b[static_cast<std::size_t>(dst)])
        return detail::kHsoStrong;

  if (detail::compound_contains(a, b) || detail::compound_contains(b, a))
    return detail::kHsoStrong;

  std::vector<char> in_a(graph.size(), 0);
  for (int id : ids_a) in_a[static_cast<std::size_t>(id)] = 1;
  const double forward = detail::hso_medium_strong(graph, ids_a, in_b);
  const double backward = detail::hso_medium_strong(graph, ids_b, in_a);
  return std::max(forward, backward);
}

}  // namespace lexsim
