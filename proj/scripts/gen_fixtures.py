#!/usr/bin/env python3
"""Regenerates the deterministic test fixtures under tests/fixtures/.

Produces:
  docs/            three plain-text documents (~100 KB total) with inflected
                   word forms, built from topic clusters around legal terms
  wordnet_mini/    a small WordNet 3.x-format database covering those terms
  golden_small.jsonl  concept -> golden-words standard aligned with the docs
  external_model.txt  a word2vec text file in foreign formatting

Everything is seeded; rerunning the script reproduces identical bytes.
"""

import json
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURES = os.path.join(HERE, "..", "tests", "fixtures")

rng = random.Random(20240817)

# ---------------------------------------------------------------- inventory

KEYS = {
    "judge": ["gavel", "robe", "bench", "chamber", "clerk", "docket", "oath", "nomination"],
    "court": ["tribunal", "hearing", "session", "motion", "filing", "bailiff", "registry", "annex"],
    "law": ["statute", "regulation", "code", "amendment", "provision", "charter", "ordinance", "doctrine"],
    "contract": ["agreement", "covenant", "breach", "signature", "party", "obligation", "deed", "rider"],
    "crime": ["felony", "theft", "arrest", "suspect", "penalty", "offense", "fraud", "alibi"],
    "evidence": ["exhibit", "testimony", "proof", "fingerprint", "ledger", "sample", "trace", "specimen"],
    "appeal": ["petition", "reversal", "remand", "brief", "appellant", "panel", "rehearing", "affirmance"],
    "trial": ["proceeding", "prosecution", "defense", "juror", "courtroom", "subpoena", "recess", "summation"],
    "jury": ["foreman", "deliberation", "ballot", "quorum", "empanelment", "instruction", "alternate", "venire"],
    "verdict": ["acquittal", "conviction", "sentence", "judgment", "finding", "decree", "mistrial", "unanimity"],
    "lawyer": ["attorney", "counsel", "barrister", "advocate", "paralegal", "solicitor", "retainer", "litigation"],
    "witness": ["deponent", "affidavit", "statement", "recollection", "observer", "crossexamination", "lineup", "transcript"],
}

VERBS = ["rule", "argue", "review", "examine", "record", "present", "consider", "reject",
         "affirm", "overturn", "question", "summon"]

GLUE = ["the", "a", "of", "in", "on", "to", "with", "by", "for", "and"]

# Pseudo-words for vocabulary bulk; they end in 'o' so no detachment rule or
# plural ever applies to them.
ONSETS = ["bl", "br", "cl", "cr", "dr", "fl", "gr", "pl", "pr", "sk", "sl", "sm",
          "sn", "sp", "st", "tr", "vl", "zm", "kr", "gl"]
NUCLEI = ["a", "e", "i", "u", "ar", "el", "im", "or", "un", "av"]
CODAS = ["no", "ro", "mo", "lo", "to", "ko", "po", "do", "vo", "zo"]


def make_fillers(count):
    words = []
    seen = set(w for cluster in KEYS.values() for w in cluster)
    seen.update(KEYS)
    seen.update(VERBS)
    seen.update(GLUE)
    i = 0
    while len(words) < count:
        name = ONSETS[i % len(ONSETS)] + NUCLEI[(i // len(ONSETS)) % len(NUCLEI)] + \
            CODAS[(i // (len(ONSETS) * len(NUCLEI))) % len(CODAS)]
        i += 1
        if name in seen:
            continue
        seen.add(name)
        words.append(name)
    return words


FILLERS = make_fillers(240)

# Each topic cluster owns a context-signature vocabulary. Key and cluster
# words appear between signature words, making them mutually substitutable in
# exactly the sense the embedding picks up; other clusters use other
# signatures, so clusters separate.
SIGNATURES = {key: FILLERS[i * 5:(i + 1) * 5] for i, key in enumerate(KEYS)}
GENERIC_FILLERS = FILLERS[len(KEYS) * 5:]


def inflect_noun(word):
    if word.endswith(("s", "x", "z", "ch", "sh")):
        return word + "es"
    if word.endswith("y") and word[-2] not in "aeiou":
        return word[:-1] + "ies"
    return word + "s"


def verb_forms(verb):
    if verb.endswith("e"):
        return [verb, verb + "s", verb + "d", verb[:-1] + "ing"]
    return [verb, verb + "s", verb + "ed", verb + "ing"]


def pick_noun(word):
    return inflect_noun(word) if rng.random() < 0.5 else word


def pick_verb(verb):
    forms = verb_forms(verb)
    return forms[rng.randrange(len(forms))] if rng.random() < 0.75 else verb


def key_sentence(key, cluster):
    def content():
        return pick_noun(key) if rng.random() < 0.35 else pick_noun(rng.choice(cluster))

    def sig():
        return rng.choice(GLUE) if rng.random() < 0.15 else rng.choice(SIGNATURES[key])

    shape = rng.randrange(3)
    if shape == 0:
        words = [sig(), content(), sig(), content(), sig()]
    elif shape == 1:
        words = [content(), sig(), sig(), content()]
    else:
        words = [sig(), content(), sig()]
    return " ".join(words) + rng.choice([".", ".", ".", "!", "?"])


def filler_sentence():
    words = [rng.choice(GLUE), rng.choice(GENERIC_FILLERS), pick_verb(rng.choice(VERBS)),
             rng.choice(GLUE), rng.choice(GENERIC_FILLERS)]
    if rng.random() < 0.5:
        words += [rng.choice(GLUE), rng.choice(GENERIC_FILLERS)]
    return " ".join(words) + "."


def build_documents():
    sentences = []
    for key, cluster in KEYS.items():
        for _ in range(150):
            sentences.append(key_sentence(key, cluster))
    for _ in range(1450):
        sentences.append(filler_sentence())
    rng.shuffle(sentences)
    docs = [[], [], []]
    for i, sentence in enumerate(sentences):
        docs[i % 3].append(sentence)
    return ["\n".join(doc) + "\n" for doc in docs]


# ------------------------------------------------------------- wordnet mini

def build_wordnet(directory):
    """Noun taxonomy: entity <- topic branches; verbs flat. Offsets are real
    byte offsets, computed with fixed-width fields in one layout pass."""
    nouns = []  # (name, words, hypernym index or None)
    nouns.append(("entity", ["entity"], None))
    for key, cluster in KEYS.items():
        key_idx = len(nouns)
        nouns.append((key, [key], 0))
        for word in cluster:
            nouns.append((word, [word], key_idx))

    # run/go/hear back the exception-list entries.
    verbs = [(verb, [verb], None) for verb in VERBS + ["run", "go", "hear"]]

    def layout(records, pos_char, is_verb):
        # Record text depends only on field widths, so compute lengths with
        # dummy offsets first, then substitute the real byte positions.
        header = "  1 Generated fixture database. Not the Princeton WordNet.\n"

        def render(record, offsets, self_offset):
            name, words, parent = record
            pointers = []
            if parent is not None:
                pointers.append(("@", offsets[parent]))
            for child_idx, (_, _, child_parent) in enumerate(records):
                if child_parent is not None and records[child_parent][0] == name:
                    pointers.append(("~", offsets[child_idx]))
            parts = ["%08d" % self_offset, "03", pos_char, "%02x" % len(words)]
            for word in words:
                parts += [word, "0"]
            parts.append("%03d" % len(pointers))
            for symbol, target in pointers:
                parts += [symbol, "%08d" % target, pos_char, "0000"]
            if is_verb:
                parts += ["01", "+", "02", "00"]
            parts += ["|", "fixture gloss for", name]
            return " ".join(parts) + "\n"

        dummy = [0] * len(records)
        position = len(header.encode())
        offsets = []
        for record in records:
            offsets.append(position)
            position += len(render(record, dummy, 0).encode())
        body = "".join(render(record, offsets, offsets[i])
                       for i, record in enumerate(records))
        return header + body, offsets

    os.makedirs(directory, exist_ok=True)
    for pos_char, suffix, records, is_verb in (("n", "noun", nouns, False),
                                               ("v", "verb", verbs, True)):
        text, offsets = layout(records, pos_char, is_verb)
        with open(os.path.join(directory, "data." + suffix), "w") as f:
            f.write(text)
        by_lemma = {}
        for (name, words, _), offset in zip(records, offsets):
            for word in words:
                by_lemma.setdefault(word, []).append(offset)
        with open(os.path.join(directory, "index." + suffix), "w") as f:
            f.write("  1 Generated fixture database. Not the Princeton WordNet.\n")
            for lemma in sorted(by_lemma):
                offs = by_lemma[lemma]
                f.write("%s %s %d 0 %d 0 %s\n" % (
                    lemma, pos_char, len(offs), len(offs),
                    " ".join("%08d" % o for o in offs)))

    with open(os.path.join(directory, "noun.exc"), "w") as f:
        f.write("men man\nfeet foot\n")
    with open(os.path.join(directory, "verb.exc"), "w") as f:
        f.write("ran run\nwent go\nheard hear\n")


# ------------------------------------------------------------------ golden

def build_golden(path):
    with open(path, "w") as f:
        for key, cluster in KEYS.items():
            golden = cluster[:5]
            pool = cluster[:] + FILLERS[:7]
            f.write(json.dumps({"key": key, "golden": golden, "pool": pool[:15]},
                               separators=(",", ":")) + "\n")


def build_external_model(path):
    rows = [
        ("alpha", ["1", "0.0", "0e0"]),
        ("beta", ["0.0", "1.000000", "0"]),
        ("gamma", ["7.071067811865475e-01", "7.071067811865475e-01", "0.0"]),
        ("delta", ["-2.5e-01", "0.75", "-0.125"]),
    ]
    with open(path, "w") as f:
        f.write("4 3\n")
        for word, values in rows:
            f.write(word + " " + " ".join(values) + " \n")  # trailing blank like word2vec.c


def check_inventory():
    seen = {}
    for group, words in [("keys", list(KEYS))] + \
            [(key, cluster) for key, cluster in KEYS.items()] + \
            [("verbs", VERBS), ("glue", GLUE), ("fillers", FILLERS)]:
        for word in words:
            assert word not in seen, "duplicate word %r in %s and %s" % (word, seen[word], group)
            seen[word] = group


def main():
    check_inventory()
    os.makedirs(FIXTURES, exist_ok=True)
    docs = build_documents()
    docs_dir = os.path.join(FIXTURES, "docs")
    os.makedirs(docs_dir, exist_ok=True)
    for i, text in enumerate(docs):
        with open(os.path.join(docs_dir, "cases_%d.txt" % i), "w") as f:
            f.write(text)
    build_wordnet(os.path.join(FIXTURES, "wordnet_mini"))
    build_golden(os.path.join(FIXTURES, "golden_small.jsonl"))
    build_external_model(os.path.join(FIXTURES, "external_model.txt"))
    total = sum(len(text.encode()) for text in docs)
    print("docs bytes:", total)


if __name__ == "__main__":
    main()
