#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "lexsim/corpus.hpp"
#include "support/tmpdir.hpp"

using namespace lexsim;

TEST_CASE("tokenize splits words, drops digits and punctuation") {
  auto sentences = tokenize("The judge ruled.");
  REQUIRE(sentences.size() == 1);
  CHECK(sentences[0] == Sentence{"the", "judge", "ruled"});

  CHECK(tokenize("").empty());

  sentences = tokenize("state-of-the-art, 42 cases!");
  REQUIRE(sentences.size() == 1);
  CHECK(sentences[0] == Sentence{"state-of-the-art", "cases"});
}

TEST_CASE("tokenize keeps internal apostrophes and trims dangling connectors") {
  auto sentences = tokenize("don't stop- now -really");
  REQUIRE(sentences.size() == 1);
  CHECK(sentences[0] == Sentence{"don't", "stop", "now", "really"});
}

TEST_CASE("sentence markers bound sentences, empty ones vanish") {
  auto sentences = tokenize("one two. three! ... four? five");
  REQUIRE(sentences.size() == 4);
  CHECK(sentences[0] == Sentence{"one", "two"});
  CHECK(sentences[1] == Sentence{"three"});
  CHECK(sentences[2] == Sentence{"four"});
  CHECK(sentences[3] == Sentence{"five"});
}

TEST_CASE("preserve-case mode keeps the raw surface distinctions") {
  TokenizerOptions options{.lowercase = false};
  auto sentences = tokenize("Judge judges Judges.", options);
  REQUIRE(sentences.size() == 1);
  CHECK(sentences[0] == Sentence{"Judge", "judges", "Judges"});
}

TEST_CASE("non-ascii words survive tokenization whole") {
  auto sentences = tokenize("caf\xc3\xa9 open");
  REQUIRE(sentences.size() == 1);
  CHECK(sentences[0][0] == "caf\xc3\xa9");
}

TEST_CASE("build_vocabulary applies min_count and the ordering contract") {
  const std::vector<Sentence> stream{{"a", "a", "a", "b"}};
  const Vocabulary vocab = build_vocabulary(stream, 2);
  REQUIRE(vocab.size() == 1);
  CHECK(vocab.word(0) == "a");
  CHECK(vocab.frequency(0) == 3);

  const Vocabulary tied = build_vocabulary(std::vector<Sentence>{{"b", "a", "b", "a"}}, 2);
  REQUIRE(tied.size() == 2);
  CHECK(tied.word(0) == "a");  // tie broken lexicographically
  CHECK(tied.word(1) == "b");

  CHECK_THROWS_AS(build_vocabulary(std::vector<Sentence>{{"x"}}, 5), EmptyVocabulary);
}

TEST_CASE("build_vocabulary is deterministic and indexes a bijection") {
  std::mt19937 rng(7);
  std::vector<Sentence> stream;
  for (int s = 0; s < 50; ++s) {
    Sentence sentence;
    for (int w = 0; w < 20; ++w) sentence.push_back("w" + std::to_string(rng() % 40));
    stream.push_back(sentence);
  }
  const Vocabulary a = build_vocabulary(stream, 3);
  const Vocabulary b = build_vocabulary(stream, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.word(i) == b.word(i));
    CHECK(a.id(a.word(i)) == i);
  }
  for (std::size_t i = 1; i < a.size(); ++i) {
    const bool ordered = a.frequency(i - 1) > a.frequency(i) ||
                         (a.frequency(i - 1) == a.frequency(i) && a.word(i - 1) < a.word(i));
    CHECK(ordered);
  }
}

TEST_CASE("merging surface forms never grows the vocabulary") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Sentence> raw;
    for (int s = 0; s < 30; ++s) {
      Sentence sentence;
      for (int w = 0; w < 12; ++w) sentence.push_back("t" + std::to_string(rng() % 60));
      raw.push_back(sentence);
    }
    // Arbitrary merge map standing in for lemmatization.
    auto merge = [](const std::string& w) {
      std::string out = w;
      if (!out.empty() && (out.back() == '7' || out.back() == '9')) out.back() = '1';
      return out;
    };
    std::vector<Sentence> merged = raw;
    for (auto& sentence : merged)
      for (auto& word : sentence) word = merge(word);
    CHECK(build_vocabulary(merged, 1).size() <= build_vocabulary(raw, 1).size());
  }
}

TEST_CASE("corpus stats count tokens, sentences and distinct words") {
  const auto sentences = tokenize("the judge ruled. the court agreed.");
  const CorpusStats stats = corpus_stats(sentences);
  CHECK(stats.sentence_count == 2);
  CHECK(stats.token_count == 6);
  CHECK(stats.distinct_lemmas == 5);
  CHECK(stats.distinct_lemmas <= stats.token_count);
}

TEST_CASE("sentence files round-trip through the one-line-per-sentence format") {
  const std::vector<Sentence> sentences{{"a", "b"}, {"c"}, {"d", "e", "f"}};
  std::stringstream buffer;
  write_sentences(buffer, sentences);
  CHECK(read_sentences(buffer) == sentences);
}

TEST_CASE("invalid byte sequences are rejected at file-read time") {
  testsupport::TmpDir tmp;
  const auto good = tmp.write("good.txt", "plain text\n");
  CHECK(read_text_file(good) == "plain text\n");

  const auto bad = tmp.write("bad.txt", std::string("abc\xff\xfe def"));
  CHECK_THROWS_AS(read_text_file(bad), IoError);

  CHECK_THROWS_AS(read_text_file(tmp.file("missing.txt")), IoError);
}
