#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "lexsim/embedding.hpp"
#include "lexsim/errors.hpp"
#include "lexsim/similarity.hpp"
#include "lexsim/taxonomy.hpp"

namespace lexsim {

enum class Architecture { linear, one_hidden };

// Per-query feature matrices: the neighbor matrix R split into W and D, the
// raw similarity matrix M (rows wup/jcn/hso/bias), its normalized form SM,
// and the value matrix V consumed by the scorer (columns d, sm1..sm3, 1).
struct FeatureBundle {
  std::string key;
  std::vector<std::string> words;            // W, row 1 of R
  std::vector<double> embedding_scores;      // D, row 2 of R
  std::array<std::vector<double>, 4> raw;    // M
  std::array<std::vector<double>, 4> scaled; // SM

  std::size_t n() const { return words.size(); }
  std::array<double, 5> value_row(std::size_t i) const {
    return {embedding_scores[i], scaled[0][i], scaled[1][i], scaled[2][i], 1.0};
  }
};

// Assembles the bundle for an explicit candidate count. The training path
// goes through build_features (n = ceil(C*l)); evaluation passes n = top_k.
inline FeatureBundle build_features_n(const std::string& key, const EmbeddingModel& model,
                                      const SynsetGraph& graph, const ICTable& ic, std::size_t n,
                                      double jcn_cap = kDefaultJcnCap) {
  FeatureBundle bundle;
  bundle.key = key;
  NeighborList neighbors = most_similar(model, key, n);
  bundle.words.reserve(n);
  bundle.embedding_scores.reserve(n);
  for (auto& entry : neighbors.entries) {
    bundle.words.push_back(std::move(entry.word));
    bundle.embedding_scores.push_back(entry.similarity);
  }

  const SimilarityBounds bounds = SimilarityBounds::with_jcn_cap(jcn_cap);
  for (auto& row : bundle.raw) row.resize(n);
  for (auto& row : bundle.scaled) row.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    bundle.raw[0][i] = wup(key, bundle.words[i], graph);
    bundle.raw[1][i] = jcn(key, bundle.words[i], graph, ic, jcn_cap);
    bundle.raw[2][i] = hso(key, bundle.words[i], graph);
    bundle.raw[3][i] = 1.0;
    bundle.scaled[0][i] = normalize(bundle.raw[0][i], bounds.wup.min, bounds.wup.max);
    bundle.scaled[1][i] = normalize(bundle.raw[1][i], bounds.jcn.min, bounds.jcn.max);
    bundle.scaled[2][i] = normalize(bundle.raw[2][i], bounds.hso.min, bounds.hso.max);
    bundle.scaled[3][i] = 1.0;
  }
  return bundle;
}

inline FeatureBundle build_features(const std::string& key, const EmbeddingModel& model,
                                    const SynsetGraph& graph, const ICTable& ic, std::size_t l,
                                    double C, double jcn_cap = kDefaultJcnCap) {
  if (l < 1 || C <= 1.0) throw InvalidConfig("build_features requires l >= 1 and C > 1");
  const auto n = static_cast<std::size_t>(std::ceil(C * static_cast<double>(l)));
  return build_features_n(key, model, graph, ic, n, jcn_cap);
}

struct RerankerWeights {
  Architecture architecture = Architecture::linear;
  int hidden_units = 0;  // used by one_hidden only
  std::vector<double> weights;
  std::uint64_t seed = 0;
};

inline std::size_t expected_weight_count(Architecture architecture, int hidden_units) {
  if (architecture == Architecture::linear) return 5;
  return static_cast<std::size_t>(hidden_units) * 5 + static_cast<std::size_t>(hidden_units);
}

// Activates the scorer on every row of V, producing the vector E.
inline std::vector<double> score(const RerankerWeights& weights, const FeatureBundle& bundle) {
  const std::size_t n = bundle.n();
  std::vector<double> e(n);
  if (weights.architecture == Architecture::linear) {
    if (weights.weights.size() != 5)
      throw ShapeMismatch("linear scorer expects 5 weights, got " +
                          std::to_string(weights.weights.size()));
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = bundle.value_row(i);
      double sum = 0.0;
      for (std::size_t j = 0; j < 5; ++j) sum += weights.weights[j] * v[j];
      e[i] = sum;
    }
    return e;
  }
  const int h = weights.hidden_units;
  if (h < 1 || weights.weights.size() != expected_weight_count(weights.architecture, h))
    throw ShapeMismatch("one-hidden scorer expects 5*H+H weights");
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = bundle.value_row(i);
    double out = 0.0;
    for (int unit = 0; unit < h; ++unit) {
      double pre = 0.0;
      for (std::size_t j = 0; j < 5; ++j)
        pre += weights.weights[static_cast<std::size_t>(unit) * 5 + j] * v[j];
      out += weights.weights[static_cast<std::size_t>(h) * 5 + static_cast<std::size_t>(unit)] /
             (1.0 + std::exp(-pre));
    }
    e[i] = out;
  }
  return e;
}

// A ranked matrix in the shared two-row form of R and Y: words over scores.
struct RankedWords {
  std::vector<std::string> words;
  std::vector<double> scores;

  std::size_t size() const { return words.size(); }

  static RankedWords from_neighbors(const NeighborList& neighbors) {
    RankedWords ranked;
    ranked.words.reserve(neighbors.entries.size());
    ranked.scores.reserve(neighbors.entries.size());
    for (const auto& entry : neighbors.entries) {
      ranked.words.push_back(entry.word);
      ranked.scores.push_back(entry.similarity);
    }
    return ranked;
  }
};

// Stacks MI = [W; E] and sorts its columns by descending e. The stable sort
// keeps W's original order on ties, and the result has the same form as R.
inline RankedWords rerank(const FeatureBundle& bundle, const std::vector<double>& e) {
  if (e.size() != bundle.n())
    throw ShapeMismatch("score vector length does not match the bundle width");
  std::vector<std::size_t> order(e.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return e[a] > e[b]; });
  RankedWords y;
  y.words.reserve(e.size());
  y.scores.reserve(e.size());
  for (std::size_t i : order) {
    y.words.push_back(bundle.words[i]);
    y.scores.push_back(e[i]);
  }
  return y;
}

// Index of w's first occurrence in the word row; the column count when absent.
inline std::size_t seek(std::string_view w, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i)
    if (row[i] == w) return i;
  return row.size();
}

inline std::size_t seek(std::string_view w, const RankedWords& p) { return seek(w, p.words); }

// Rank error of a golden list against a ranked matrix with n columns:
// x_i is 1 for golden words ranked inside the first l, (n-seek)/(n-l) after
// that, and err = 1 - (eps + sum x_i) / (|G intersect W| + eps), in [0,1].
// n == l is tolerated as long as no golden word falls off the list; anything
// narrower leaves the position credit undefined.
inline double compute_err(const std::vector<std::string>& golden, const RankedWords& y,
                          std::size_t l, double epsilon) {
  if (golden.size() != l) throw ShapeMismatch("golden list length must equal l");
  if (epsilon <= 0.0 || epsilon >= 1.0) throw InvalidConfig("epsilon must be in (0,1)");
  const std::size_t n = y.size();
  if (n < l) throw DegenerateShape("ranked matrix has fewer columns than l");

  double sum = 0.0;
  std::size_t intersection = 0;
  for (const auto& g : golden) {
    const std::size_t s = seek(g, y);
    if (s < n) ++intersection;
    if (s < l) {
      sum += 1.0;
    } else if (n == l) {
      throw DegenerateShape("n == l with a golden word outside the ranked list");
    } else {
      sum += static_cast<double>(n - s) / static_cast<double>(n - l);
    }
  }
  const double err = 1.0 - (epsilon + sum) / (static_cast<double>(intersection) + epsilon);
  return std::clamp(err, 0.0, 1.0);
}

struct TrainingEntry {
  std::string key;
  std::vector<std::string> golden;
};

struct RerankerConfig {
  std::size_t l = 5;
  double C = 3.0;
  double epsilon = 1e-9;
  int folds = 5;
  Architecture architecture = Architecture::linear;
  int hidden_units = 8;
  std::uint64_t seed = 1;
  int max_iters = 5000;
  int patience = 200;
  double jcn_cap = kDefaultJcnCap;
};

struct FoldReport {
  double train_err = 0.0;
  double validation_err = 0.0;
  std::vector<double> accepted_errs;  // strictly decreasing, initial value first
};

struct CVReport {
  std::vector<FoldReport> folds;
  RerankerWeights final_weights;
  std::vector<double> final_accepted_errs;
  double final_train_err = 0.0;
  std::size_t empty_intersection_entries = 0;  // |G intersect W| == 0 quirk counter
  std::vector<std::string> skipped_keys;       // out-of-vocabulary entries
  RerankerConfig config;
};

namespace detail {

struct PreparedEntry {
  FeatureBundle bundle;
  const std::vector<std::string>* golden;
};

inline double mean_err(const RerankerWeights& weights,
                       const std::vector<const PreparedEntry*>& entries, std::size_t l,
                       double epsilon) {
  double total = 0.0;
  for (const auto* entry : entries)
    total += compute_err(*entry->golden, rerank(entry->bundle, score(weights, entry->bundle)), l,
                         epsilon);
  return total / static_cast<double>(entries.size());
}

// Derivative-free hill climbing: Gaussian proposals with sigma annealed from
// 0.5 by x0.95 every 50 iterations, accepting only strict improvements.
inline std::pair<RerankerWeights, std::vector<double>> hill_climb(
    const std::vector<const PreparedEntry*>& entries, const RerankerConfig& config,
    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RerankerWeights weights;
  weights.architecture = config.architecture;
  weights.hidden_units = config.architecture == Architecture::one_hidden ? config.hidden_units : 0;
  weights.seed = seed;
  const std::size_t count = expected_weight_count(config.architecture, config.hidden_units);
  weights.weights.resize(count);
  for (auto& w : weights.weights)
    w = (rng() >> 11) * (1.0 / 9007199254740992.0) - 0.5;  // uniform [-0.5, 0.5)

  double best = mean_err(weights, entries, config.l, config.epsilon);
  std::vector<double> accepted{best};

  std::normal_distribution<double> gauss(0.0, 1.0);
  double sigma = 0.5;
  int since_accept = 0;
  RerankerWeights proposal = weights;
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    if (iter % 50 == 0) sigma *= 0.95;
    for (std::size_t i = 0; i < count; ++i)
      proposal.weights[i] = weights.weights[i] + sigma * gauss(rng);
    const double err = mean_err(proposal, entries, config.l, config.epsilon);
    if (err < best) {
      weights.weights = proposal.weights;
      best = err;
      accepted.push_back(err);
      since_accept = 0;
    } else if (++since_accept >= config.patience) {
      break;
    }
  }
  return {std::move(weights), std::move(accepted)};
}

}  // namespace detail

// n-fold cross-validated training of the reranking scorer against the rank
// error, followed by a final retrain on every usable entry.
inline CVReport train_reranker(const std::vector<TrainingEntry>& entries,
                               const EmbeddingModel& model, const SynsetGraph& graph,
                               const ICTable& ic, const RerankerConfig& config) {
  if (config.folds < 2) throw InvalidConfig("folds must be >= 2");
  if (config.l < 1 || config.C <= 1.0) throw InvalidConfig("requires l >= 1 and C > 1");
  if (config.max_iters < 1 || config.patience < 1)
    throw InvalidConfig("max_iters and patience must be >= 1");
  if (config.architecture == Architecture::one_hidden && config.hidden_units < 1)
    throw InvalidConfig("one-hidden architecture needs hidden_units >= 1");

  CVReport report;
  report.config = config;

  std::vector<detail::PreparedEntry> prepared;
  prepared.reserve(entries.size());
  for (const auto& entry : entries) {
    if (entry.golden.size() != config.l)
      throw ShapeMismatch("golden list for key '" + entry.key + "' must have length l");
    if (!model.vocabulary().contains(entry.key)) {
      report.skipped_keys.push_back(entry.key);
      continue;
    }
    prepared.push_back(
        {build_features(entry.key, model, graph, ic, config.l, config.C, config.jcn_cap),
         &entry.golden});
  }
  if (prepared.empty()) throw InsufficientEntries("no training entry has an in-vocabulary key");
  if (prepared.size() < static_cast<std::size_t>(config.folds))
    throw InsufficientEntries("need at least as many usable entries as folds");

  for (const auto& entry : prepared) {
    std::unordered_set<std::string_view> in_w(entry.bundle.words.begin(),
                                              entry.bundle.words.end());
    bool any = false;
    for (const auto& g : *entry.golden)
      if (in_w.count(g)) {
        any = true;
        break;
      }
    if (!any) ++report.empty_intersection_entries;
  }

  std::vector<std::size_t> order(prepared.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 shuffle_rng(config.seed);
  std::shuffle(order.begin(), order.end(), shuffle_rng);

  const std::size_t total = order.size();
  for (int fold = 0; fold < config.folds; ++fold) {
    const std::size_t begin = total * static_cast<std::size_t>(fold) / config.folds;
    const std::size_t end = total * (static_cast<std::size_t>(fold) + 1) / config.folds;
    std::vector<const detail::PreparedEntry*> train_set, validation_set;
    for (std::size_t i = 0; i < total; ++i) {
      (i >= begin && i < end ? validation_set : train_set).push_back(&prepared[order[i]]);
    }
    auto [weights, accepted] =
        detail::hill_climb(train_set, config, config.seed + static_cast<std::uint64_t>(fold) + 1);
    FoldReport fold_report;
    fold_report.train_err = accepted.back();
    fold_report.validation_err = detail::mean_err(weights, validation_set, config.l, config.epsilon);
    fold_report.accepted_errs = std::move(accepted);
    report.folds.push_back(std::move(fold_report));
  }

  std::vector<const detail::PreparedEntry*> all;
  all.reserve(prepared.size());
  for (const auto& entry : prepared) all.push_back(&entry);
  auto [weights, accepted] = detail::hill_climb(all, config, config.seed);
  report.final_weights = std::move(weights);
  report.final_train_err = accepted.back();
  report.final_accepted_errs = std::move(accepted);
  return report;
}

inline const char* architecture_name(Architecture architecture) {
  return architecture == Architecture::linear ? "linear" : "one-hidden";
}

inline Architecture architecture_from_name(const std::string& name) {
  if (name == "linear") return Architecture::linear;
  if (name == "one-hidden") return Architecture::one_hidden;
  throw InvalidConfig("unknown architecture: " + name);
}

inline nlohmann::json reranker_config_to_json(const RerankerConfig& config) {
  return {{"l", config.l},
          {"C", config.C},
          {"epsilon", config.epsilon},
          {"folds", config.folds},
          {"architecture", architecture_name(config.architecture)},
          {"hidden_units", config.hidden_units},
          {"seed", config.seed},
          {"max_iters", config.max_iters},
          {"patience", config.patience},
          {"jcn_cap", config.jcn_cap}};
}

inline RerankerConfig reranker_config_from_json(const nlohmann::json& j) {
  RerankerConfig config;
  config.l = j.value("l", config.l);
  config.C = j.value("C", config.C);
  config.epsilon = j.value("epsilon", config.epsilon);
  config.folds = j.value("folds", config.folds);
  if (j.contains("architecture"))
    config.architecture = architecture_from_name(j.at("architecture").get<std::string>());
  config.hidden_units = j.value("hidden_units", config.hidden_units);
  config.seed = j.value("seed", config.seed);
  config.max_iters = j.value("max_iters", config.max_iters);
  config.patience = j.value("patience", config.patience);
  config.jcn_cap = j.value("jcn_cap", config.jcn_cap);
  return config;
}

inline void save_weights(const RerankerWeights& weights, const RerankerConfig& config,
                         const std::filesystem::path& path) {
  nlohmann::json j = {{"architecture", architecture_name(weights.architecture)},
                      {"hidden_units", weights.hidden_units},
                      {"weights", weights.weights},
                      {"seed", weights.seed},
                      {"config", reranker_config_to_json(config)}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot write weights file: " + path.string());
  out << j.dump(2) << '\n';
}

inline std::pair<RerankerWeights, RerankerConfig> load_weights(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open weights file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed weights file " + path.string() + ": " + e.what());
  }
  RerankerWeights weights;
  weights.architecture = architecture_from_name(j.at("architecture").get<std::string>());
  weights.hidden_units = j.value("hidden_units", 0);
  weights.weights = j.at("weights").get<std::vector<double>>();
  weights.seed = j.value("seed", std::uint64_t{0});
  RerankerConfig config =
      j.contains("config") ? reranker_config_from_json(j.at("config")) : RerankerConfig{};
  if (weights.weights.size() != expected_weight_count(weights.architecture, weights.hidden_units))
    throw ShapeMismatch("weights file has the wrong weight count for its architecture");
  return {std::move(weights), std::move(config)};
}

}  // namespace lexsim
