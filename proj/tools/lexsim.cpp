// lexsim command-line front end: prepare | train | query | rerank-train |
// eval | report. See README.md for the pipeline walkthrough.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lexsim/cli.hpp"

namespace {

// Exit codes: 0 success, 1 usage, 2 I/O, 3 degenerate training input,
// 4 insufficient reranker entries, 5 all golden keys out of vocabulary,
// 6 malformed or inconsistent inputs.
constexpr int kExitIo = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitInsufficient = 4;
constexpr int kExitAllOov = 5;
constexpr int kExitBadInput = 6;

// Configuration file defaults (JSON mirroring the flag names); explicit
// flags override anything loaded here.
nlohmann::json load_config_defaults(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::ifstream in(argv[i + 1]);
      if (!in) throw lexsim::IoError(std::string("cannot open config file: ") + argv[i + 1]);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw lexsim::IoError(std::string("malformed config file: ") + e.what());
      }
      return j;
    }
  }
  return nlohmann::json::object();
}

template <typename T>
void preset(const nlohmann::json& config, const char* key, T& value) {
  if (config.contains(key)) value = config.at(key).get<T>();
}

lexsim::ReportFormat parse_format(const std::string& name) {
  if (name == "markdown" || name == "md") return lexsim::ReportFormat::markdown;
  if (name == "csv") return lexsim::ReportFormat::csv;
  if (name == "plot-data" || name == "plot") return lexsim::ReportFormat::plot_data;
  throw lexsim::InvalidConfig("unknown report format: " + name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"domain word embeddings with taxonomy-aware reranking"};
  app.require_subcommand(1);

  nlohmann::json config;
  try {
    config = load_config_defaults(argc, argv);
  } catch (const lexsim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file with flag defaults");

  // prepare
  lexsim::cli::PrepareOptions prepare;
  std::vector<std::string> prepare_inputs;
  std::string prepare_output, prepare_taxonomy;
  preset(config, "lemmatize", prepare.lemmatize);
  preset(config, "preserve_case", prepare.preserve_case);
  preset(config, "taxonomy", prepare_taxonomy);
  preset(config, "threads", prepare.threads);
  auto* cmd_prepare = app.add_subcommand("prepare", "tokenize (and lemmatize) a text corpus");
  cmd_prepare->add_option("--input", prepare_inputs, "input files or directories")->required();
  cmd_prepare->add_option("--output", prepare_output, "sentence-per-line corpus to write")->required();
  cmd_prepare->add_flag("--lemmatize,!--no-lemmatize", prepare.lemmatize, "map tokens to lemmas");
  cmd_prepare->add_flag("--preserve-case", prepare.preserve_case, "keep the original casing");
  cmd_prepare->add_option("--taxonomy", prepare_taxonomy, "WordNet database directory")
      ->envname("LEXSIM_TAXONOMY");
  cmd_prepare->add_option("--threads", prepare.threads, "documents processed in parallel");

  // train
  lexsim::cli::TrainOptions train;
  std::string train_corpus, train_output;
  preset(config, "dimensionality", train.config.dimensionality);
  preset(config, "window", train.config.window);
  preset(config, "min_count", train.config.min_count);
  preset(config, "epochs", train.config.epochs);
  preset(config, "learning_rate", train.config.initial_learning_rate);
  preset(config, "seed", train.config.seed);
  preset(config, "threads", train.config.threads);
  auto* cmd_train = app.add_subcommand("train", "train a CBOW hierarchical-softmax model");
  cmd_train->add_option("--corpus", train_corpus, "prepared corpus file")->required();
  cmd_train->add_option("--output", train_output, "model file to write (word2vec text format)")
      ->required();
  cmd_train->add_option("--dim", train.config.dimensionality, "embedding dimensionality");
  cmd_train->add_option("--window", train.config.window, "context window size");
  cmd_train->add_option("--min-count", train.config.min_count, "minimum word frequency");
  cmd_train->add_option("--epochs", train.config.epochs, "training epochs");
  cmd_train->add_option("--learning-rate", train.config.initial_learning_rate,
                        "initial learning rate");
  cmd_train->add_option("--seed", train.config.seed, "random seed");
  cmd_train->add_option("--threads", train.config.threads,
                        "training threads (>1 relaxes bit determinism)");

  // query
  lexsim::cli::QueryOptions query;
  std::string query_model, query_taxonomy, query_weights, query_corpus;
  auto* cmd_query = app.add_subcommand("query", "interactive similarity queries");
  cmd_query->add_option("--model", query_model, "model file")->required();
  cmd_query->add_option("--taxonomy", query_taxonomy, "WordNet database directory")
      ->envname("LEXSIM_TAXONOMY");
  cmd_query->add_option("--weights", query_weights, "reranker weights file");
  cmd_query->add_option("--corpus", query_corpus, "prepared corpus for information content");
  cmd_query->add_option("-n,--top", query.top_n, "neighbors per query");

  // rerank-train
  lexsim::cli::RerankTrainOptions rerank;
  std::string rr_model, rr_taxonomy, rr_golden, rr_corpus, rr_weights, rr_report, rr_architecture;
  preset(config, "C", rerank.config.C);
  preset(config, "epsilon", rerank.config.epsilon);
  preset(config, "folds", rerank.config.folds);
  preset(config, "seed", rerank.config.seed);
  preset(config, "max_iters", rerank.config.max_iters);
  preset(config, "patience", rerank.config.patience);
  preset(config, "jcn_cap", rerank.config.jcn_cap);
  preset(config, "hidden_units", rerank.config.hidden_units);
  preset(config, "architecture", rr_architecture);
  auto* cmd_rerank = app.add_subcommand("rerank-train", "train the reranking scorer");
  cmd_rerank->add_option("--model", rr_model, "model file")->required();
  cmd_rerank->add_option("--taxonomy", rr_taxonomy, "WordNet database directory")
      ->required()
      ->envname("LEXSIM_TAXONOMY");
  cmd_rerank->add_option("--golden", rr_golden, "golden standard (JSON lines)")->required();
  cmd_rerank->add_option("--corpus", rr_corpus, "prepared corpus for information content")
      ->required();
  cmd_rerank->add_option("--weights-out", rr_weights, "weights file to write")->required();
  cmd_rerank->add_option("--report-out", rr_report, "cross-validation report to write");
  cmd_rerank->add_option("--C", rerank.config.C, "candidate factor, n = ceil(C*l)");
  cmd_rerank->add_option("--epsilon", rerank.config.epsilon, "error-function epsilon");
  cmd_rerank->add_option("--folds", rerank.config.folds, "cross-validation folds");
  cmd_rerank->add_option("--architecture", rr_architecture, "linear | one-hidden");
  cmd_rerank->add_option("--hidden-units", rerank.config.hidden_units,
                         "hidden units for one-hidden");
  cmd_rerank->add_option("--seed", rerank.config.seed, "random seed");
  cmd_rerank->add_option("--max-iters", rerank.config.max_iters, "hill-climbing proposals");
  cmd_rerank->add_option("--patience", rerank.config.patience,
                         "stop after this many rejected proposals");
  cmd_rerank->add_option("--jcn-cap", rerank.config.jcn_cap, "Jiang-Conrath cap");

  // eval
  lexsim::cli::EvalOptions eval;
  std::vector<std::string> eval_models;
  std::string eval_taxonomy, eval_golden, eval_weights, eval_corpus, eval_out;
  preset(config, "epsilon", eval.eval_config.epsilon);
  preset(config, "classical_precision", eval.eval_config.classical_precision);
  preset(config, "threads", eval.eval_config.threads);
  if (config.contains("top_k")) eval.top_k = config.at("top_k").get<std::vector<std::size_t>>();
  auto* cmd_eval = app.add_subcommand("eval", "evaluate model variants against a golden standard");
  cmd_eval->add_option("--model", eval_models, "model as name=path (repeatable)")->required();
  cmd_eval->add_option("--taxonomy", eval_taxonomy, "WordNet database directory")
      ->envname("LEXSIM_TAXONOMY");
  cmd_eval->add_option("--golden", eval_golden, "golden standard (JSON lines)")->required();
  cmd_eval->add_option("--weights", eval_weights, "reranker weights (adds a reranked variant)");
  cmd_eval->add_option("--corpus", eval_corpus, "prepared corpus for information content");
  cmd_eval->add_option("--rerank-base", eval.rerank_base,
                       "model name the reranked variant builds on (default: last)");
  cmd_eval->add_option("--top-k", eval.top_k, "requested word counts");
  cmd_eval->add_option("--out-dir", eval_out, "directory for report files")->required();
  cmd_eval->add_option("--epsilon", eval.eval_config.epsilon, "error-function epsilon");
  cmd_eval->add_flag("--classical-precision", eval.eval_config.classical_precision,
                     "use |G/\\W|/|W| instead of 1-err");
  cmd_eval->add_option("--threads", eval.eval_config.threads, "concepts evaluated in parallel");

  // report
  lexsim::cli::ReportOptions report;
  std::string report_input, report_format = "markdown";
  auto* cmd_report = app.add_subcommand("report", "re-render an eval report");
  cmd_report->add_option("--input", report_input, "report.json produced by eval")->required();
  cmd_report->add_option("--format", report_format, "markdown | csv | plot-data");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_prepare) {
      for (const auto& input : prepare_inputs) prepare.inputs.emplace_back(input);
      prepare.output = prepare_output;
      prepare.taxonomy_dir = prepare_taxonomy;
      lexsim::cli::run_prepare(prepare, std::cout);
    } else if (*cmd_train) {
      train.corpus = train_corpus;
      train.output = train_output;
      lexsim::cli::run_train(train, std::cout);
    } else if (*cmd_query) {
      query.model = query_model;
      if (!query_taxonomy.empty()) query.taxonomy_dir = query_taxonomy;
      if (!query_weights.empty()) query.weights = query_weights;
      if (!query_corpus.empty()) query.corpus = query_corpus;
      lexsim::cli::run_query(query, std::cin, std::cout);
    } else if (*cmd_rerank) {
      rerank.model = rr_model;
      rerank.taxonomy_dir = rr_taxonomy;
      rerank.golden = rr_golden;
      rerank.corpus = rr_corpus;
      rerank.weights_out = rr_weights;
      if (!rr_report.empty()) rerank.report_out = rr_report;
      if (!rr_architecture.empty())
        rerank.config.architecture = lexsim::architecture_from_name(rr_architecture);
      lexsim::cli::run_rerank_train(rerank, std::cout);
    } else if (*cmd_eval) {
      for (const auto& spec : eval_models) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
          throw lexsim::InvalidConfig("--model expects name=path, got: " + spec);
        eval.models.emplace_back(spec.substr(0, eq), spec.substr(eq + 1));
      }
      if (!eval_taxonomy.empty()) eval.taxonomy_dir = eval_taxonomy;
      eval.golden = eval_golden;
      if (!eval_weights.empty()) eval.weights = eval_weights;
      if (!eval_corpus.empty()) eval.corpus = eval_corpus;
      eval.out_dir = eval_out;
      lexsim::cli::run_eval(eval, std::cout);
    } else if (*cmd_report) {
      report.input = report_input;
      report.format = parse_format(report_format);
      lexsim::cli::run_report(report, std::cout);
    }
  } catch (const lexsim::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const lexsim::EmptyVocabulary& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const lexsim::DegenerateCorpus& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const lexsim::InsufficientEntries& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInsufficient;
  } catch (const lexsim::AllKeysOutOfVocabulary& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitAllOov;
  } catch (const lexsim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  return 0;
}
