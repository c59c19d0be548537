"""Generate the seeded synthetic QA corpus used by the tests.

Each record asks about one subject; its documents are short biographies
built from sentence templates with hand-written AMR graphs. Parser
scores are simulated: every PENMAN lexeme becomes a ``Ġ``-prefixed token
(long labels split into subwords, sense suffixes as their own piece),
graph syntax is near-certain, generic concepts are cheap and names,
dates and predicates are expensive.

    python3 scripts/make_synthetic_corpus.py [-o tests/fixtures/synthetic_corpus.jsonl]
"""

import argparse
import json
import random
import re

SEED = 20250701
N_RECORDS = 20

PEOPLE = [
    ("Marie", "Curie"), ("Alan", "Turing"), ("Ada", "Lovelace"), ("Niels", "Bohr"),
    ("Grace", "Hopper"), ("Enrico", "Fermi"), ("Lise", "Meitner"), ("Claude", "Shannon"),
    ("Emmy", "Noether"), ("Srinivasa", "Ramanujan"), ("Rosalind", "Franklin"), ("Kurt", "Godel"),
    ("Hedy", "Lamarr"), ("John", "Nash"), ("Dorothy", "Hodgkin"), ("Paul", "Dirac"),
    ("Barbara", "McClintock"), ("Richard", "Feynman"), ("Chien-Shiung", "Wu"), ("Max", "Planck"),
]
CITIES = ["Warsaw", "London", "Copenhagen", "Rome", "Vienna", "Berlin", "Chennai", "Boston",
          "Zurich", "Paris", "Princeton", "Leipzig"]
FIELDS = ["physics", "chemistry", "mathematics", "biology", "engineering"]
ORGS = ["Meridian", "Halcyon", "Northwind", "Aurora", "Keystone", "Lumen"]
MONTHS = ["January", "February", "March", "April", "May", "June", "July", "August",
          "September", "October", "November", "December"]

GENERIC = {"person", "city", "company", "thing", "university", "country"}
MODIFIER = {"old", "many", "famous", "early", "young"}

_LEXEME = re.compile(r'\(|\)|/|:[^\s()]+|"[^"]*"|[^\s()/:"]+')
_SENSE = re.compile(r"^(.*?)(-\d+)$")


def _name(var, words):
    ops = " ".join(f':op{i} "{w}"' for i, w in enumerate(words, 1))
    return f"({var} / name {ops})"


def sentence_born(rng, first, last, city, month, year):
    text = f"{first} {last} was born in {city} in {MONTHS[month - 1]} {year}."
    amr = (f"(b / bear-02 :ARG1 (p / person :name {_name('n', [first, last])}) "
           f":location (c / city :name {_name('n2', [city])}) "
           f":time (d / date-entity :month {month} :year {year}))")
    return text, amr


def sentence_study(rng, first, last, field_, city):
    text = f"{last} studied {field_} at the old university in {city}."
    amr = (f"(s / study-01 :ARG0 (p / person :name {_name('n', [last])}) :ARG1 (f / {field_}) "
           f":location (u / university :mod (o / old) "
           f":location (c / city :name {_name('n2', [city])})))")
    return text, amr


def sentence_found(rng, first, last, org, year):
    text = f"In {year} {last} founded the {org} company with many colleagues."
    amr = (f"(f / found-01 :ARG0 (p / person :name {_name('n', [last])}) "
           f":ARG1 (c / company :name {_name('n2', [org])}) "
           f":accompanier (c2 / colleague :quant (m / many)) "
           f":time (d / date-entity :year {year}))")
    return text, amr


def sentence_award(rng, first, last, field_, year):
    text = f"{first} {last} received a famous prize for {field_} research in {year}."
    amr = (f"(r / receive-01 :ARG0 (p / person :name {_name('n', [first, last])}) "
           f":ARG1 (p2 / prize :mod (f / famous) :topic (r2 / research-01 :ARG1 (f2 / {field_}))) "
           f":time (d / date-entity :year {year}))")
    return text, amr


def sentence_move(rng, first, last, city, month, year):
    text = f"{last} moved to {city} in {MONTHS[month - 1]} {year} and taught young students there."
    amr = (f"(a / and :op1 (m / move-01 :ARG1 (p / person :name {_name('n', [last])}) "
           f":ARG2 (c / city :name {_name('n2', [city])}) "
           f":time (d / date-entity :month {month} :year {year})) "
           f":op2 (t / teach-01 :ARG0 p :ARG2 (s / student :mod (y / young)) :location c))")
    return text, amr


def _class_logprob(rng, label, continuation=False):
    if label in GENERIC:
        return -rng.uniform(0.05, 0.6)
    if label in MODIFIER:
        return -rng.uniform(0.4, 1.3)
    return -rng.uniform(1.2, 1.9) if continuation else -rng.uniform(1.6, 2.3)


def _split(stem):
    return [stem[i:i + 5] for i in range(0, len(stem), 5)] or [stem]


def tokenize(rng, penman):
    """Simulated parser output for one PENMAN string."""
    tokens = []
    prev = None
    for lex in _LEXEME.findall(penman):
        if prev == "/":
            m = _SENSE.match(lex)
            stem, sense = (m.group(1), m.group(2)) if m else (lex, "")
            pieces = _split(stem) + ([sense] if sense else [])
            tokens.append({"text": "Ġ" + pieces[0], "logprob": _class_logprob(rng, lex)})
            for piece in pieces[1:]:
                tokens.append({"text": piece, "logprob": _class_logprob(rng, lex, True)})
        else:
            tokens.append({"text": "Ġ" + lex, "logprob": -rng.uniform(0.005, 0.08)})
        prev = lex
    for t in tokens:
        t["logprob"] = round(t["logprob"], 6)
    return tokens


def make_document(rng, person, hasanswer, facts):
    first, last = person
    builders = [
        lambda: sentence_born(rng, first, last, facts["city"], facts["month"], facts["year"]),
        lambda: sentence_study(rng, first, last, facts["field"], rng.choice(CITIES)),
        lambda: sentence_found(rng, first, last, rng.choice(ORGS), facts["year"] + rng.randint(25, 40)),
        lambda: sentence_award(rng, first, last, facts["field"], facts["year"] + rng.randint(30, 50)),
        lambda: sentence_move(rng, first, last, rng.choice(CITIES), rng.randint(1, 12),
                              facts["year"] + rng.randint(18, 30)),
    ]
    if hasanswer:
        chosen = [builders[0]] + rng.sample(builders[1:], rng.randint(1, 2))
    else:
        chosen = rng.sample(builders[1:], rng.randint(1, 2))
    sentences = [b() for b in chosen]
    return {
        "text": " ".join(s for s, _ in sentences),
        "hasanswer": hasanswer,
        "graphs": [{"penman": amr, "tokens": tokenize(rng, amr)} for _, amr in sentences],
    }


def make_record(rng, i, person):
    facts = {
        "city": rng.choice(CITIES),
        "month": rng.randint(1, 12),
        "year": rng.randint(1820, 1930),
        "field": rng.choice(FIELDS),
    }
    k = rng.randint(1, 5)
    flags = [True] * k + [False] * rng.randint(0, 2)
    rng.shuffle(flags)
    return {
        "schema_version": 1,
        "query_id": f"syn-{i:03d}",
        "query": f"In what year was {person[0]} {person[1]} born?",
        "answers": [str(facts["year"])],
        "documents": [make_document(rng, person, f, facts) for f in flags],
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("-o", "--output", default="tests/fixtures/synthetic_corpus.jsonl")
    parser.add_argument("--seed", type=int, default=SEED)
    parser.add_argument("-n", "--records", type=int, default=N_RECORDS)
    args = parser.parse_args(argv)
    rng = random.Random(args.seed)
    with open(args.output, "w", encoding="utf-8") as fh:
        for i in range(args.records):
            record = make_record(rng, i, PEOPLE[i % len(PEOPLE)])
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
