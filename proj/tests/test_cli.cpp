#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lexsim/cli.hpp"
#include "support/golden_gen.hpp"
#include "support/tmpdir.hpp"
#include "support/wordnet_writer.hpp"

using namespace lexsim;
using testsupport::TmpDir;

namespace {

// A small legal-flavored fixture: documents with inflected forms plus a
// matching taxonomy so lemmatization has something to do.
void write_docs(const TmpDir& tmp) {
  tmp.write("docs/a.txt",
            "The judges ruled on the cases. The judge ruled in the court.\n"
            "The courts heard the lawyers. The lawyer judges the crimes.\n");
  tmp.write("docs/b.txt",
            "The crime troubled the court. Judges and lawyers argued laws.\n"
            "The law ruled the case! Crimes trouble courts?\n");
  tmp.write("docs/c.txt",
            "A lawyer judged the case. The law and the court and the judge.\n");
}

void write_taxonomy(const TmpDir& tmp) {
  using testsupport::WnSynset;
  std::vector<WnSynset> synsets{
      {100, 'n', {"entity"}, {{"~", 200, 'n'}, {"~", 300, 'n'}}},
      {200, 'n', {"person"}, {{"@", 100, 'n'}, {"~", 210, 'n'}, {"~", 220, 'n'}}},
      {210, 'n', {"judge"}, {{"@", 200, 'n'}}},
      {220, 'n', {"lawyer"}, {{"@", 200, 'n'}}},
      {300, 'n', {"institution"}, {{"@", 100, 'n'}, {"~", 310, 'n'}}},
      {310, 'n', {"court"}, {{"@", 300, 'n'}}},
      {400, 'n', {"law"}, {{"@", 100, 'n'}}},
      {410, 'n', {"case"}, {{"@", 100, 'n'}}},
      {420, 'n', {"crime"}, {{"@", 100, 'n'}}},
      {900, 'v', {"rule"}, {}},
      {910, 'v', {"judge"}, {}},
      {920, 'v', {"hear"}, {}},
      {930, 'v', {"argue"}, {}},
      {940, 'v', {"trouble"}, {}},
  };
  testsupport::write_wordnet_db(tmp.path() / "wn", synsets,
                                {{'v', {{"heard", "hear"}}}, {'n', {{"men", "man"}}}});
}

}  // namespace

TEST_CASE("prepare writes sentence-per-line corpora; lemmatization merges forms") {
  TmpDir tmp;
  write_docs(tmp);
  write_taxonomy(tmp);

  cli::PrepareOptions raw;
  raw.inputs = {tmp.path() / "docs"};
  raw.output = tmp.file("raw.txt");
  std::ostringstream raw_log;
  const CorpusStats raw_stats = cli::run_prepare(raw, raw_log);
  CHECK(raw_stats.sentence_count > 0);
  CHECK(raw_log.str().find("tokens") != std::string::npos);

  cli::PrepareOptions lemma = raw;
  lemma.output = tmp.file("lemma.txt");
  lemma.lemmatize = true;
  lemma.taxonomy_dir = tmp.path() / "wn";
  std::ostringstream lemma_log;
  const CorpusStats lemma_stats = cli::run_prepare(lemma, lemma_log);

  CHECK(lemma_stats.token_count == raw_stats.token_count);
  CHECK(lemma_stats.distinct_lemmas <= raw_stats.distinct_lemmas);

  const auto sentences = read_sentence_file(tmp.file("lemma.txt"));
  bool saw_judge = false, saw_judges = false;
  for (const auto& sentence : sentences)
    for (const auto& word : sentence) {
      saw_judge |= word == "judge";
      saw_judges |= word == "judges";
    }
  CHECK(saw_judge);
  CHECK_FALSE(saw_judges);

  // Parallel prepare merges documents in path order: identical output.
  cli::PrepareOptions parallel = lemma;
  parallel.output = tmp.file("lemma_mt.txt");
  parallel.threads = 3;
  std::ostringstream parallel_log;
  cli::run_prepare(parallel, parallel_log);
  CHECK(read_text_file(tmp.file("lemma_mt.txt")) == read_text_file(tmp.file("lemma.txt")));

  cli::PrepareOptions missing;
  missing.inputs = {tmp.path() / "nope"};
  missing.output = tmp.file("x.txt");
  std::ostringstream missing_log;
  CHECK_THROWS_AS(cli::run_prepare(missing, missing_log), IoError);
}

TEST_CASE("train writes a loadable model and logs one loss line per epoch") {
  TmpDir tmp;
  write_docs(tmp);
  write_taxonomy(tmp);

  cli::PrepareOptions prepare;
  prepare.inputs = {tmp.path() / "docs"};
  prepare.output = tmp.file("corpus.txt");
  prepare.lemmatize = true;
  prepare.taxonomy_dir = tmp.path() / "wn";
  std::ostringstream prep_log;
  cli::run_prepare(prepare, prep_log);

  cli::TrainOptions train;
  train.corpus = tmp.file("corpus.txt");
  train.output = tmp.file("model.txt");
  train.config.dimensionality = 8;
  train.config.window = 3;
  train.config.min_count = 1;
  train.config.epochs = 5;
  train.config.seed = 7;
  std::ostringstream log;
  cli::run_train(train, log);

  const EmbeddingModel model = load_text(train.output);
  CHECK(model.vocabulary().size() > 0);

  std::istringstream lines(log.str());
  std::string line;
  std::vector<double> losses;
  while (std::getline(lines, line)) {
    std::istringstream parts(line);
    std::string word, ratio, label;
    double value;
    if (parts >> word >> ratio >> label >> value && word == "epoch" && label == "loss")
      losses.push_back(value);
  }
  REQUIRE(losses.size() == 5);
  for (std::size_t e = 1; e < losses.size(); ++e) CHECK(losses[e] <= losses[e - 1] * 1.05);

  // Same seed, same bytes.
  cli::TrainOptions again = train;
  again.output = tmp.file("model2.txt");
  std::ostringstream log2;
  cli::run_train(again, log2);
  CHECK(read_text_file(train.output) == read_text_file(again.output));
}

TEST_CASE("query lemmatizes input, answers, and survives unknown words") {
  TmpDir tmp;
  write_docs(tmp);
  write_taxonomy(tmp);

  cli::PrepareOptions prepare;
  prepare.inputs = {tmp.path() / "docs"};
  prepare.output = tmp.file("corpus.txt");
  prepare.lemmatize = true;
  prepare.taxonomy_dir = tmp.path() / "wn";
  std::ostringstream prep_log;
  cli::run_prepare(prepare, prep_log);

  cli::TrainOptions train;
  train.corpus = tmp.file("corpus.txt");
  train.output = tmp.file("model.txt");
  train.config.dimensionality = 8;
  train.config.window = 3;
  train.config.min_count = 1;
  train.config.epochs = 3;
  std::ostringstream train_log;
  cli::run_train(train, train_log);

  cli::QueryOptions query;
  query.model = train.output;
  query.taxonomy_dir = tmp.path() / "wn";
  query.top_n = 3;

  std::istringstream in("judges\nqqzz\ncourt\n");
  std::ostringstream out;
  cli::run_query(query, in, out);
  const std::string text = out.str();
  CHECK(text.find("query: judge\n") != std::string::npos);  // lemmatized before lookup
  CHECK(text.find("not in vocabulary: qqzz") != std::string::npos);
  CHECK(text.find("query: court") != std::string::npos);

  // Identity weights must not change the list.
  RerankerWeights identity{Architecture::linear, 0, {1, 0, 0, 0, 0}, 0};
  RerankerConfig reranker_config;
  save_weights(identity, reranker_config, tmp.file("identity.json"));
  cli::QueryOptions reranked = query;
  reranked.weights = tmp.file("identity.json");
  reranked.corpus = tmp.file("corpus.txt");

  std::istringstream in_base("court\n");
  std::ostringstream out_base;
  cli::run_query(query, in_base, out_base);
  std::istringstream in_reranked("court\n");
  std::ostringstream out_reranked;
  cli::run_query(reranked, in_reranked, out_reranked);

  auto words_of = [](const std::string& s) {
    std::vector<std::string> words;
    std::istringstream lines(s);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.rfind("  ", 0) == 0) {
        std::istringstream parts(line);
        std::string word;
        parts >> word;
        words.push_back(word);
      }
    }
    return words;
  };
  CHECK(words_of(out_base.str()) == words_of(out_reranked.str()));
}

TEST_CASE("rerank-train and eval produce their artifacts end to end") {
  TmpDir tmp;
  write_docs(tmp);
  write_taxonomy(tmp);

  cli::PrepareOptions prepare;
  prepare.inputs = {tmp.path() / "docs"};
  prepare.output = tmp.file("corpus.txt");
  prepare.lemmatize = true;
  prepare.taxonomy_dir = tmp.path() / "wn";
  std::ostringstream prep_log;
  cli::run_prepare(prepare, prep_log);

  cli::TrainOptions train;
  train.corpus = tmp.file("corpus.txt");
  train.output = tmp.file("model.txt");
  train.config.dimensionality = 8;
  train.config.window = 3;
  train.config.min_count = 1;
  train.config.epochs = 3;
  std::ostringstream train_log;
  cli::run_train(train, train_log);

  // Synthetic golden standard from the model itself (noise-free).
  const EmbeddingModel model = load_text(train.output);
  std::mt19937_64 rng(5);
  const GoldenStandard golden = testsupport::synthetic_golden(model, 6, 2, 0.0, rng);
  save_golden(golden, tmp.file("golden.jsonl"));

  cli::RerankTrainOptions rerank;
  rerank.model = train.output;
  rerank.taxonomy_dir = tmp.path() / "wn";
  rerank.golden = tmp.file("golden.jsonl");
  rerank.corpus = tmp.file("corpus.txt");
  rerank.weights_out = tmp.file("weights.json");
  rerank.report_out = tmp.file("cv.json");
  rerank.config.folds = 2;
  rerank.config.C = 2.0;
  rerank.config.max_iters = 400;
  rerank.config.patience = 100;
  std::ostringstream rerank_log;
  const CVReport cv = cli::run_rerank_train(rerank, rerank_log);
  CHECK(cv.folds.size() == 2);
  CHECK(cv.final_train_err <= 0.05);  // identity-solvable by construction
  CHECK(std::filesystem::exists(tmp.file("weights.json")));
  CHECK(std::filesystem::exists(tmp.file("cv.json")));
  CHECK(rerank_log.str().find("validation_err") != std::string::npos);

  cli::EvalOptions eval;
  eval.models = {{"lemma", train.output}};
  eval.taxonomy_dir = tmp.path() / "wn";
  eval.golden = tmp.file("golden.jsonl");
  eval.weights = tmp.file("weights.json");
  eval.corpus = tmp.file("corpus.txt");
  eval.top_k = {3, 4};
  eval.out_dir = tmp.file("reports");
  std::ostringstream eval_log;
  const EvalReport report = cli::run_eval(eval, eval_log);

  REQUIRE(report.rows.size() == 2);  // base + reranked
  CHECK(report.rows[0].model == "lemma");
  CHECK(report.rows[1].model == "lemma+rerank");
  for (const char* name : {"report.json", "report.md", "report.csv", "plot.json"})
    CHECK(std::filesystem::exists(tmp.file("reports") / name));

  // The report subcommand re-renders the same markdown.
  cli::ReportOptions render;
  render.input = tmp.file("reports") / "report.json";
  render.format = ReportFormat::markdown;
  std::ostringstream rendered;
  cli::run_report(render, rendered);
  CHECK(rendered.str() == read_text_file(tmp.file("reports") / "report.md"));

  // Markdown shape: header + rule + one line per model row.
  std::istringstream md(rendered.str());
  std::string line;
  std::size_t lines = 0;
  while (std::getline(md, line)) ++lines;
  CHECK(lines == 2 + report.rows.size());
}

#ifdef LEXSIM_CLI_BIN
namespace {

int run_cli(const std::string& args) {
  const std::string command = std::string(LEXSIM_CLI_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("the binary maps errors to documented exit codes") {
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("prepare --input /nonexistent-path-z --output /tmp/lexsim_cli_out.txt") == 2);
  CHECK(run_cli("train --corpus /nonexistent-path-z --output /tmp/lexsim_cli_out.txt") == 2);
  CHECK(run_cli("definitely-not-a-subcommand") != 0);

  // Nothing reaches min-count: degenerate training input is exit code 3.
  TmpDir tmp;
  tmp.write("tiny.txt", "a b\nc d\n");
  CHECK(run_cli("train --corpus " + tmp.file("tiny.txt").string() + " --output " +
                tmp.file("m.txt").string() + " --min-count 5") == 3);
}

TEST_CASE("config files preset flag defaults, flags still win") {
  TmpDir tmp;
  write_docs(tmp);
  cli::PrepareOptions prepare;
  prepare.inputs = {tmp.path() / "docs"};
  prepare.output = tmp.file("corpus.txt");
  std::ostringstream log;
  cli::run_prepare(prepare, log);

  tmp.write("config.json", R"({"dimensionality": 4, "min_count": 1, "epochs": 1})");
  REQUIRE(run_cli("train --config " + tmp.file("config.json").string() + " --corpus " +
                  tmp.file("corpus.txt").string() + " --output " + tmp.file("m4.txt").string()) ==
          0);
  REQUIRE(run_cli("train --config " + tmp.file("config.json").string() + " --corpus " +
                  tmp.file("corpus.txt").string() + " --output " + tmp.file("m8.txt").string() +
                  " --dim 8") == 0);

  auto header_dim = [](const std::filesystem::path& path) {
    std::ifstream in(path);
    std::size_t vocab = 0, dim = 0;
    in >> vocab >> dim;
    return dim;
  };
  CHECK(header_dim(tmp.file("m4.txt")) == 4);  // config default applied
  CHECK(header_dim(tmp.file("m8.txt")) == 8);  // explicit flag overrides

  CHECK(run_cli("train --config /nonexistent-config.json --corpus " +
                tmp.file("corpus.txt").string() + " --output " + tmp.file("x.txt").string()) == 2);
}

TEST_CASE("the taxonomy directory can come from the environment") {
  TmpDir tmp;
  write_docs(tmp);
  write_taxonomy(tmp);
  const std::string command = "LEXSIM_TAXONOMY=" + (tmp.path() / "wn").string() + " " +
                              LEXSIM_CLI_BIN + " prepare --lemmatize --input " +
                              (tmp.path() / "docs").string() + " --output " +
                              tmp.file("out.txt").string() + " >/dev/null 2>&1";
  REQUIRE(std::system(command.c_str()) == 0);
  const auto sentences = read_sentence_file(tmp.file("out.txt"));
  bool saw_judges = false;
  for (const auto& sentence : sentences)
    for (const auto& word : sentence) saw_judges |= word == "judges";
  CHECK_FALSE(saw_judges);  // lemmatization actually ran
}
#endif
