#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lexsim/lexsim.hpp"

namespace lexsim::cli {

namespace fs = std::filesystem;

// FNV-1a over the canonical config JSON; echoed into outputs for provenance.
inline std::string config_hash(const nlohmann::json& config) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : config.dump()) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

inline std::vector<fs::path> collect_input_files(const std::vector<fs::path>& inputs) {
  std::vector<fs::path> files;
  for (const auto& input : inputs) {
    std::error_code ec;
    if (fs::is_directory(input, ec)) {
      for (const auto& entry : fs::recursive_directory_iterator(input, ec))
        if (entry.is_regular_file()) files.push_back(entry.path());
      if (ec) throw IoError("cannot read directory: " + input.string());
    } else if (fs::is_regular_file(input, ec)) {
      files.push_back(input);
    } else {
      throw IoError("input path does not exist or is unreadable: " + input.string());
    }
  }
  std::sort(files.begin(), files.end());  // deterministic merge order
  return files;
}

struct PrepareOptions {
  std::vector<fs::path> inputs;
  fs::path output;
  bool lemmatize = false;
  bool preserve_case = false;
  fs::path taxonomy_dir;  // required with lemmatize
  int threads = 1;
};

inline CorpusStats run_prepare(const PrepareOptions& options, std::ostream& log) {
  const auto files = collect_input_files(options.inputs);
  if (files.empty()) throw IoError("no input files found");

  std::optional<Morphy> morphy;
  if (options.lemmatize) {
    if (options.taxonomy_dir.empty())
      throw InvalidConfig("--lemmatize needs a taxonomy directory");
    const SynsetGraph graph = load_wordnet(options.taxonomy_dir);
    morphy.emplace(make_morphy_data(graph, options.taxonomy_dir));
  }

  TokenizerOptions tokenizer{.lowercase = !options.preserve_case};
  auto process = [&](const fs::path& file) {
    std::vector<Sentence> sentences = tokenize(read_text_file(file), tokenizer);
    if (morphy) sentences = morphy->lemmatize_sentences(sentences);
    return sentences;
  };

  std::vector<std::vector<Sentence>> documents(files.size());
  const int threads = std::max(1, options.threads);
  if (threads == 1 || files.size() < 2) {
    for (std::size_t i = 0; i < files.size(); ++i) documents[i] = process(files[i]);
  } else {
    const std::size_t shards = std::min<std::size_t>(threads, files.size());
    std::vector<std::future<void>> futures;
    for (std::size_t s = 0; s < shards; ++s) {
      futures.push_back(std::async(std::launch::async, [&, s] {
        for (std::size_t i = files.size() * s / shards; i < files.size() * (s + 1) / shards; ++i)
          documents[i] = process(files[i]);
      }));
    }
    for (auto& f : futures) f.get();
  }

  std::vector<Sentence> merged;
  for (auto& doc : documents)
    for (auto& sentence : doc) merged.push_back(std::move(sentence));

  std::ofstream out(options.output);
  if (!out) throw IoError("cannot write corpus file: " + options.output.string());
  write_sentences(out, merged);

  const CorpusStats stats = corpus_stats(merged);
  log << "documents " << files.size() << " sentences " << stats.sentence_count << " tokens "
      << stats.token_count << " distinct " << stats.distinct_lemmas << '\n';
  return stats;
}

struct TrainOptions {
  fs::path corpus;
  fs::path output;
  TrainConfig config;
};

inline void run_train(const TrainOptions& options, std::ostream& log) {
  const auto sentences = read_sentence_file(options.corpus);
  TrainResult result = train_cbow(sentences, options.config, [&](int epoch, double loss) {
    log << "epoch " << (epoch + 1) << '/' << options.config.epochs << " loss " << loss << '\n';
  });
  save_text(result.model, options.output);
  log << "vocabulary " << result.model.vocabulary().size() << " model " << options.output.string()
      << '\n';
}

struct QueryOptions {
  fs::path model;
  std::optional<fs::path> taxonomy_dir;
  std::optional<fs::path> weights;
  std::optional<fs::path> corpus;  // IC source for the reranked scorer
  std::size_t top_n = 10;
};

// Line-oriented REPL: lemmatize the query, answer with the ranked list.
// Out-of-vocabulary queries get a message, never a crash.
inline void run_query(const QueryOptions& options, std::istream& in, std::ostream& out) {
  const EmbeddingModel model = load_text(options.model);

  std::optional<SynsetGraph> graph;
  Morphy morphy;
  if (options.taxonomy_dir) {
    graph = load_wordnet(*options.taxonomy_dir);
    morphy = Morphy(make_morphy_data(*graph, *options.taxonomy_dir));
  }

  std::optional<RerankerWeights> weights;
  std::optional<ICTable> ic;
  double jcn_cap = kDefaultJcnCap;
  if (options.weights) {
    if (!graph) throw InvalidConfig("reranked queries need a taxonomy directory");
    auto [loaded, config] = load_weights(*options.weights);
    weights = std::move(loaded);
    jcn_cap = config.jcn_cap;
    const std::vector<Sentence> ic_corpus =
        options.corpus ? read_sentence_file(*options.corpus) : std::vector<Sentence>{};
    ic = compute_ic(ic_corpus, *graph);
  }

  std::string line;
  while (std::getline(in, line)) {
    const auto sentences = tokenize(line);
    if (sentences.empty() || sentences[0].empty()) continue;
    const std::string query = morphy.lemmatize_any(sentences[0][0]);
    out << "query: " << query << '\n';
    const std::size_t limit = model.vocabulary().size() > 0
                                  ? std::min(options.top_n, model.vocabulary().size() - 1)
                                  : 0;
    if (!model.vocabulary().contains(query) || limit == 0) {
      out << "not in vocabulary: " << query << '\n';
      continue;
    }
    if (weights) {
      const FeatureBundle bundle = build_features_n(query, model, *graph, *ic, limit, jcn_cap);
      const RankedWords ranked = rerank(bundle, score(*weights, bundle));
      for (std::size_t i = 0; i < ranked.size(); ++i)
        out << "  " << ranked.words[i] << ' ' << ranked.scores[i] << '\n';
    } else {
      for (const auto& entry : most_similar(model, query, limit).entries)
        out << "  " << entry.word << ' ' << entry.similarity << '\n';
    }
  }
}

struct RerankTrainOptions {
  fs::path model;
  fs::path taxonomy_dir;
  fs::path golden;
  fs::path corpus;  // IC source
  fs::path weights_out;
  std::optional<fs::path> report_out;
  RerankerConfig config;
};

inline nlohmann::json cv_report_to_json(const CVReport& report) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& fold : report.folds)
    folds.push_back({{"train_err", fold.train_err},
                     {"validation_err", fold.validation_err},
                     {"accepted_errs", fold.accepted_errs}});
  return {{"folds", folds},
          {"final_train_err", report.final_train_err},
          {"final_accepted_errs", report.final_accepted_errs},
          {"empty_intersection_entries", report.empty_intersection_entries},
          {"skipped_keys", report.skipped_keys},
          {"config", reranker_config_to_json(report.config)}};
}

inline CVReport run_rerank_train(const RerankTrainOptions& options, std::ostream& log) {
  const EmbeddingModel model = load_text(options.model);
  const SynsetGraph graph = load_wordnet(options.taxonomy_dir);
  const ICTable ic = compute_ic(read_sentence_file(options.corpus), graph);
  const GoldenStandard golden = load_golden(options.golden);

  RerankerConfig config = options.config;
  config.l = golden.l;
  CVReport report = train_reranker(golden.concepts, model, graph, ic, config);

  save_weights(report.final_weights, config, options.weights_out);
  if (options.report_out) {
    std::ofstream out(*options.report_out);
    if (!out) throw IoError("cannot write report file: " + options.report_out->string());
    out << cv_report_to_json(report).dump(2) << '\n';
  }

  for (std::size_t f = 0; f < report.folds.size(); ++f)
    log << "fold " << (f + 1) << " train_err " << report.folds[f].train_err << " validation_err "
        << report.folds[f].validation_err << '\n';
  log << "final train_err " << report.final_train_err << " empty_intersection "
      << report.empty_intersection_entries << " skipped " << report.skipped_keys.size() << '\n';
  return report;
}

struct EvalOptions {
  std::vector<std::pair<std::string, fs::path>> models;  // name -> model file
  std::optional<fs::path> taxonomy_dir;
  fs::path golden;
  std::optional<fs::path> weights;
  std::optional<fs::path> corpus;       // IC source for the reranked variant
  std::string rerank_base;              // model name the reranked variant builds on
  std::vector<std::size_t> top_k{20, 50, 100, 200};
  fs::path out_dir;
  EvalConfig eval_config;
};

inline EvalReport run_eval(const EvalOptions& options, std::ostream& log) {
  if (options.models.empty()) throw InvalidConfig("eval needs at least one model");
  const GoldenStandard golden = load_golden(options.golden);

  EvalConfig eval_config = options.eval_config;
  eval_config.l = golden.l;

  EvalReport report;
  report.top_k = options.top_k;

  std::vector<std::pair<std::string, EmbeddingModel>> models;
  models.reserve(options.models.size());
  for (const auto& [name, path] : options.models) models.emplace_back(name, load_text(path));

  for (const auto& [name, model] : models) {
    report.rows.push_back(evaluate(name, base_pipeline(model), golden, options.top_k, eval_config));
    log << "evaluated " << name << " (skipped " << report.rows.back().skipped_keys << ")\n";
  }

  std::optional<SynsetGraph> graph;
  std::optional<ICTable> ic;
  if (options.weights) {
    if (!options.taxonomy_dir) throw InvalidConfig("the reranked variant needs a taxonomy directory");
    graph = load_wordnet(*options.taxonomy_dir);
    const std::vector<Sentence> ic_corpus =
        options.corpus ? read_sentence_file(*options.corpus) : std::vector<Sentence>{};
    ic = compute_ic(ic_corpus, *graph);
    auto [weights, reranker_config] = load_weights(*options.weights);

    const std::string base = options.rerank_base.empty() ? models.back().first : options.rerank_base;
    const auto it = std::find_if(models.begin(), models.end(),
                                 [&](const auto& m) { return m.first == base; });
    if (it == models.end()) throw InvalidConfig("unknown rerank base model: " + base);
    report.rows.push_back(evaluate(base + "+rerank",
                                   reranked_pipeline(it->second, *graph, *ic, weights,
                                                     reranker_config.jcn_cap),
                                   golden, options.top_k, eval_config));
    log << "evaluated " << base << "+rerank (skipped " << report.rows.back().skipped_keys << ")\n";
  }

  std::string corpus_id;
  for (const auto& [name, path] : options.models)
    corpus_id += (corpus_id.empty() ? "" : ";") + name + "=" + path.filename().string();
  report.corpus_id = corpus_id;

  nlohmann::json config_echo = {{"golden", options.golden.string()},
                                {"top_k", options.top_k},
                                {"l", eval_config.l},
                                {"epsilon", eval_config.epsilon},
                                {"classical_precision", eval_config.classical_precision},
                                {"models", corpus_id}};
  report.config_hash = config_hash(config_echo);

  fs::create_directories(options.out_dir);
  auto write = [&](const fs::path& name, const std::string& text) {
    std::ofstream out(options.out_dir / name);
    if (!out) throw IoError("cannot write report: " + (options.out_dir / name).string());
    out << text;
  };
  write("report.json", report_to_json(report).dump(2) + "\n");
  write("report.md", emit_report(report, ReportFormat::markdown));
  write("report.csv", emit_report(report, ReportFormat::csv));
  write("plot.json", emit_report(report, ReportFormat::plot_data));
  log << "reports written to " << options.out_dir.string() << '\n';
  return report;
}

struct ReportOptions {
  fs::path input;  // report.json produced by eval
  ReportFormat format = ReportFormat::markdown;
};

inline void run_report(const ReportOptions& options, std::ostream& out) {
  out << emit_report(load_report(options.input), options.format);
}

}  // namespace lexsim::cli
