#include <catch2/catch_amalgamated.hpp>

#include "lexsim/morphy.hpp"
#include "support/tmpdir.hpp"

using namespace lexsim;

namespace {

Morphy fixture_morphy() {
  MorphyData data;
  for (const char* lemma : {"judge", "court", "glass", "box", "church", "man", "specie",
                            "species", "body", "case", "trial"})
    data.add_lemma(Pos::noun, lemma);
  for (const char* lemma : {"train", "rule", "judge", "carry", "agree", "argue", "run", "go"})
    data.add_lemma(Pos::verb, lemma);
  data.add_lemma(Pos::noun, "training");  // also a noun lemma in its own right
  data.add_exception(Pos::noun, "men", {"man"});
  data.add_exception(Pos::verb, "ran", {"run"});
  data.add_exception(Pos::verb, "went", {"go"});
  data.add_exception(Pos::verb, "carried", {"carry"});  // -ied is out of rule reach
  return Morphy(std::move(data));
}

}  // namespace

TEST_CASE("suffix detachment maps inflected forms to their lemma") {
  const Morphy morphy = fixture_morphy();
  CHECK(morphy.lemmatize("judges", Pos::noun) == "judge");
  CHECK(morphy.lemmatize("training", Pos::verb) == "train");
  CHECK(morphy.lemmatize("judge", Pos::noun) == "judge");  // already a lemma
  CHECK(morphy.lemmatize("glasses", Pos::noun) == "glass");
  CHECK(morphy.lemmatize("boxes", Pos::noun) == "box");
  CHECK(morphy.lemmatize("churches", Pos::noun) == "church");
  CHECK(morphy.lemmatize("bodies", Pos::noun) == "body");
  CHECK(morphy.lemmatize("carried", Pos::verb) == "carry");  // via the exception list
  CHECK(morphy.lemmatize("argued", Pos::verb) == "argue");
  CHECK(morphy.lemmatize("rules", Pos::verb) == "rule");
  CHECK(morphy.lemmatize("agreed", Pos::verb) == "agree");
}

TEST_CASE("exception lists are consulted before the rules") {
  const Morphy morphy = fixture_morphy();
  CHECK(morphy.lemmatize("men", Pos::noun) == "man");
  CHECK(morphy.lemmatize("ran", Pos::verb) == "run");
  CHECK(morphy.lemmatize("went", Pos::verb) == "go");
}

TEST_CASE("candidates outside the lemma index are rejected") {
  const Morphy morphy = fixture_morphy();
  CHECK(morphy.lemmatize("wugs", Pos::noun) == "wugs");
  CHECK(morphy.lemmatize("zorging", Pos::verb) == "zorging");
}

TEST_CASE("unknown pos and empty tokens pass through unchanged") {
  const Morphy morphy = fixture_morphy();
  CHECK(morphy.lemmatize("judges", Pos::other) == "judges");
  CHECK(morphy.lemmatize("", Pos::noun).empty());
}

TEST_CASE("noun route first, verb retry when it fails") {
  const Morphy morphy = fixture_morphy();
  CHECK(morphy.lemmatize_any("judges") == "judge");    // noun route
  CHECK(morphy.lemmatize_any("argued") == "argue");    // verb retry
  CHECK(morphy.lemmatize_any("training") == "train");  // noun route finds nothing to detach
  CHECK(morphy.lemmatize_any("court") == "court");
}

TEST_CASE("lemmatization is idempotent over the lemma index") {
  const Morphy morphy = fixture_morphy();
  for (Pos pos : {Pos::noun, Pos::verb}) {
    for (const auto& lemma : morphy.data().lemmas[detail::pos_slot(pos)]) {
      const std::string once = morphy.lemmatize(lemma, pos);
      CHECK(morphy.lemmatize(once, pos) == once);
    }
  }
}

TEST_CASE("lemmas keep the token invariants") {
  const Morphy morphy = fixture_morphy();
  for (const char* token : {"judges", "men", "carried", "qzqz", "boxes"}) {
    const std::string lemma = morphy.lemmatize_any(token);
    CHECK(!lemma.empty());
    for (char c : lemma) {
      CHECK(c != ' ');
      CHECK(!(c >= 'A' && c <= 'Z'));
    }
  }
}

TEST_CASE("exception files load per part of speech") {
  testsupport::TmpDir tmp;
  tmp.write("noun.exc", "feet foot\nteeth tooth\n");
  tmp.write("verb.exc", "was be\n");
  MorphyData data;
  data.add_lemma(Pos::noun, "foot");
  data.add_lemma(Pos::noun, "tooth");
  data.add_lemma(Pos::verb, "be");
  load_exception_files(tmp.path(), data);
  const Morphy morphy{std::move(data)};
  CHECK(morphy.lemmatize("feet", Pos::noun) == "foot");
  CHECK(morphy.lemmatize("teeth", Pos::noun) == "tooth");
  CHECK(morphy.lemmatize("was", Pos::verb) == "be");
  CHECK(morphy.lemmatize("feet", Pos::verb) == "feet");  // wrong pos, no match
}
