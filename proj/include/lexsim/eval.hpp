#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "lexsim/embedding.hpp"
#include "lexsim/errors.hpp"
#include "lexsim/reranker.hpp"

namespace lexsim {

// Expert-curated concepts: key lemma plus its golden word list, optionally a
// candidate pool the golden words were picked from.
struct GoldenStandard {
  std::vector<TrainingEntry> concepts;
  std::vector<std::vector<std::string>> pools;  // parallel to concepts, may be empty
  std::size_t l = 0;
};

namespace detail {

inline bool clean_lemma(const std::string& lemma) {
  if (lemma.empty()) return false;
  for (unsigned char c : lemma)
    if (c == ' ' || c == '\t' || (c >= 'A' && c <= 'Z')) return false;
  return true;
}

}  // namespace detail

// JSON-lines golden standard: {"key": lemma, "golden": [lemmas], "pool": [...]}.
inline GoldenStandard load_golden(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open golden standard file: " + path.string());

  GoldenStandard golden;
  std::unordered_set<std::string> keys;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    auto fail = [&](const std::string& what) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + what);
    };
    if (!j.contains("key") || !j.contains("golden")) fail("entry needs \"key\" and \"golden\"");

    TrainingEntry entry;
    entry.key = j.at("key").get<std::string>();
    entry.golden = j.at("golden").get<std::vector<std::string>>();
    if (!detail::clean_lemma(entry.key)) fail("key must be a lowercase lemma");
    if (entry.golden.empty()) fail("golden list is empty");
    std::unordered_set<std::string> distinct;
    for (const auto& g : entry.golden) {
      if (!detail::clean_lemma(g)) fail("golden word must be a lowercase lemma: " + g);
      if (!distinct.insert(g).second) fail("duplicate golden word: " + g);
    }
    if (!keys.insert(entry.key).second) fail("duplicate key: " + entry.key);
    if (golden.l == 0)
      golden.l = entry.golden.size();
    else if (entry.golden.size() != golden.l)
      fail("golden lists must share one length (expected " + std::to_string(golden.l) + ")");

    golden.pools.push_back(j.value("pool", std::vector<std::string>{}));
    golden.concepts.push_back(std::move(entry));
  }
  return golden;
}

inline void save_golden(const GoldenStandard& golden, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write golden standard file: " + path.string());
  for (std::size_t i = 0; i < golden.concepts.size(); ++i) {
    nlohmann::json j = {{"key", golden.concepts[i].key}, {"golden", golden.concepts[i].golden}};
    if (i < golden.pools.size() && !golden.pools[i].empty()) j["pool"] = golden.pools[i];
    out << j.dump() << '\n';
  }
}

// Completeness |G intersect W| / |G| with set semantics.
inline double recall(const std::vector<std::string>& golden, const std::vector<std::string>& words) {
  if (golden.empty()) throw EmptyGolden("recall needs a non-empty golden list");
  std::unordered_set<std::string_view> returned(words.begin(), words.end());
  std::size_t hit = 0;
  for (const auto& g : golden)
    if (returned.count(g)) ++hit;
  return static_cast<double>(hit) / static_cast<double>(golden.size());
}

// Rank-aware precision: 1 - err.
inline double precision(const std::vector<std::string>& golden, const RankedWords& y,
                        std::size_t l, double epsilon) {
  return 1.0 - compute_err(golden, y, l, epsilon);
}

// The set-membership ratio |G intersect W| / |W|, kept for comparison runs.
inline double classical_precision(const std::vector<std::string>& golden,
                                  const std::vector<std::string>& words) {
  if (words.empty()) return 0.0;
  std::unordered_set<std::string_view> wanted(golden.begin(), golden.end());
  std::size_t hit = 0;
  for (const auto& w : words)
    if (wanted.count(w)) ++hit;
  return static_cast<double>(hit) / static_cast<double>(words.size());
}

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalRow {
  std::string model;
  std::vector<Prf> by_k;          // parallel to EvalReport::top_k
  std::size_t skipped_keys = 0;   // out-of-vocabulary concepts
};

struct EvalReport {
  std::vector<std::size_t> top_k;
  std::vector<EvalRow> rows;
  std::string corpus_id;
  std::string config_hash;
};

struct EvalConfig {
  std::size_t l = 5;
  double epsilon = 1e-9;
  bool classical_precision = false;
  int threads = 1;
};

// A ranked-list source: any model variant answering (key, top_k) queries in
// the shared two-row form.
using RankFn = std::function<RankedWords(const std::string&, std::size_t)>;

inline RankFn base_pipeline(const EmbeddingModel& model) {
  return [&model](const std::string& key, std::size_t k) {
    return RankedWords::from_neighbors(most_similar(model, key, k));
  };
}

inline RankFn reranked_pipeline(const EmbeddingModel& model, const SynsetGraph& graph,
                                const ICTable& ic, const RerankerWeights& weights,
                                double jcn_cap = kDefaultJcnCap) {
  return [&model, &graph, &ic, weights, jcn_cap](const std::string& key, std::size_t k) {
    FeatureBundle bundle = build_features_n(key, model, graph, ic, k, jcn_cap);
    return rerank(bundle, score(weights, bundle));
  };
}

// Macro-averaged precision/recall per requested k, F1 from the averages.
// Out-of-vocabulary keys are skipped and counted, never scored.
inline EvalRow evaluate(const std::string& name, const RankFn& rank, const GoldenStandard& golden,
                        const std::vector<std::size_t>& top_k, const EvalConfig& config) {
  if (golden.concepts.empty()) throw EmptyGolden("golden standard has no concepts");
  if (top_k.empty()) throw InvalidConfig("evaluate needs at least one top_k value");

  struct ConceptScores {
    bool skipped = false;
    std::vector<std::pair<double, double>> pr;  // per k
  };
  const std::size_t count = golden.concepts.size();
  std::vector<ConceptScores> scores(count);

  auto run_concept = [&](std::size_t i) {
    ConceptScores result;
    const auto& entry = golden.concepts[i];
    try {
      for (const std::size_t k : top_k) {
        const RankedWords ranked = rank(entry.key, k);
        const double p = config.classical_precision
                             ? classical_precision(entry.golden, ranked.words)
                             : precision(entry.golden, ranked, config.l, config.epsilon);
        result.pr.emplace_back(p, recall(entry.golden, ranked.words));
      }
    } catch (const OutOfVocabulary&) {
      result.skipped = true;
      result.pr.clear();
    }
    return result;
  };

  if (config.threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) scores[i] = run_concept(i);
  } else {
    const std::size_t shards = std::min<std::size_t>(static_cast<std::size_t>(config.threads), count);
    std::vector<std::future<void>> futures;
    for (std::size_t s = 0; s < shards; ++s) {
      futures.push_back(std::async(std::launch::async, [&, s] {
        for (std::size_t i = count * s / shards; i < count * (s + 1) / shards; ++i)
          scores[i] = run_concept(i);
      }));
    }
    for (auto& f : futures) f.get();
  }

  EvalRow row;
  row.model = name;
  std::size_t used = 0;
  std::vector<double> p_sum(top_k.size(), 0.0), r_sum(top_k.size(), 0.0);
  for (const auto& concept_scores : scores) {
    if (concept_scores.skipped) {
      ++row.skipped_keys;
      continue;
    }
    ++used;
    for (std::size_t k = 0; k < top_k.size(); ++k) {
      p_sum[k] += concept_scores.pr[k].first;
      r_sum[k] += concept_scores.pr[k].second;
    }
  }
  if (used == 0) throw AllKeysOutOfVocabulary("no golden key is in the model vocabulary");

  for (std::size_t k = 0; k < top_k.size(); ++k) {
    Prf prf;
    prf.precision = p_sum[k] / static_cast<double>(used);
    prf.recall = r_sum[k] / static_cast<double>(used);
    prf.f1 = (prf.precision + prf.recall) == 0.0
                 ? 0.0
                 : 2.0 * prf.precision * prf.recall / (prf.precision + prf.recall);
    row.by_k.push_back(prf);
  }
  return row;
}

enum class ReportFormat { markdown, csv, plot_data };

namespace detail {

inline std::string format_metric(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3f", value);
  return buffer;
}

}  // namespace detail

// markdown: one row per model, one P/R/F1 block per k. csv: long form
// (model,k,metric,value). plot_data: JSON F1-vs-k series per model.
inline std::string emit_report(const EvalReport& report, ReportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::markdown: {
      out << "| Model |";
      for (const auto k : report.top_k)
        out << " k=" << k << " P | k=" << k << " R | k=" << k << " F1 |";
      out << '\n' << "|---|";
      for (std::size_t i = 0; i < report.top_k.size() * 3; ++i) out << "---|";
      out << '\n';
      for (const auto& row : report.rows) {
        out << "| " << row.model << " |";
        for (const auto& prf : row.by_k)
          out << ' ' << detail::format_metric(prf.precision) << " | "
              << detail::format_metric(prf.recall) << " | " << detail::format_metric(prf.f1)
              << " |";
        out << '\n';
      }
      break;
    }
    case ReportFormat::csv: {
      out << "model,k,metric,value\n";
      char buffer[32];
      for (const auto& row : report.rows) {
        for (std::size_t i = 0; i < report.top_k.size(); ++i) {
          const auto& prf = row.by_k[i];
          const std::pair<const char*, double> metrics[] = {
              {"precision", prf.precision}, {"recall", prf.recall}, {"f1", prf.f1}};
          for (const auto& [metric, value] : metrics) {
            std::snprintf(buffer, sizeof(buffer), "%.10g", value);
            out << row.model << ',' << report.top_k[i] << ',' << metric << ',' << buffer << '\n';
          }
        }
      }
      break;
    }
    case ReportFormat::plot_data: {
      nlohmann::json series = nlohmann::json::array();
      for (const auto& row : report.rows) {
        std::vector<double> f1;
        f1.reserve(row.by_k.size());
        for (const auto& prf : row.by_k) f1.push_back(prf.f1);
        series.push_back({{"model", row.model}, {"f1", f1}});
      }
      nlohmann::json j = {{"top_k", report.top_k}, {"series", series}};
      out << j.dump(2) << '\n';
      break;
    }
  }
  return std::move(out).str();
}

inline nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json metrics = nlohmann::json::array();
    for (std::size_t i = 0; i < row.by_k.size(); ++i)
      metrics.push_back({{"k", report.top_k[i]},
                         {"precision", row.by_k[i].precision},
                         {"recall", row.by_k[i].recall},
                         {"f1", row.by_k[i].f1}});
    rows.push_back({{"model", row.model}, {"skipped_keys", row.skipped_keys}, {"metrics", metrics}});
  }
  return {{"top_k", report.top_k},
          {"rows", rows},
          {"corpus_id", report.corpus_id},
          {"config_hash", report.config_hash}};
}

inline EvalReport report_from_json(const nlohmann::json& j) {
  EvalReport report;
  report.top_k = j.at("top_k").get<std::vector<std::size_t>>();
  report.corpus_id = j.value("corpus_id", "");
  report.config_hash = j.value("config_hash", "");
  for (const auto& row_json : j.at("rows")) {
    EvalRow row;
    row.model = row_json.at("model").get<std::string>();
    row.skipped_keys = row_json.value("skipped_keys", std::size_t{0});
    for (const auto& metric : row_json.at("metrics")) {
      Prf prf;
      prf.precision = metric.at("precision").get<double>();
      prf.recall = metric.at("recall").get<double>();
      prf.f1 = metric.at("f1").get<double>();
      row.by_k.push_back(prf);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

inline EvalReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed report file " + path.string() + ": " + e.what());
  }
  return report_from_json(j);
}

}  // namespace lexsim
