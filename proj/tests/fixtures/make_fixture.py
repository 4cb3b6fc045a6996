#!/usr/bin/env python3
"""Generates the bundled fixture corpus and its golden outputs.

The golden counts are produced by a brute-force pairwise loop written
independently of the C++ counter; the expected bias and correlation values
use plain Python math. Run from this directory:

    python3 make_fixture.py
"""

import json
import math
import random
import re
from statistics import NormalDist

SEED = 20240611
WINDOW = 10
MIN_COUNT = 2
MIN_DOC_TOKENS = 20

FEMALE = ["female", "woman", "girl", "sister", "she", "her", "hers", "daughter"]
MALE = ["male", "man", "boy", "brother", "he", "him", "his", "son"]

# occupation -> share of female subjects used when generating sentences (percent)
OCCUPATIONS = {
    "nurse": 90, "librarian": 80, "secretary": 85, "teacher": 70, "baker": 55,
    "doctor": 40, "lawyer": 35, "engineer": 15, "carpenter": 10, "mechanic": 5,
}

SUBJECTS_F = ["she", "the woman", "his sister", "the girl", "her daughter", "a female colleague"]
SUBJECTS_M = ["he", "the man", "her brother", "the boy", "his son", "a male colleague"]
TEMPLATES = [
    "{s} worked as a {o} in the old town.",
    "Everyone knew that {s} was the best {o} around!",
    "Last year {s} trained to become a {o}.",
    "Was {s} really a {o} at the hospital?",
    "The {o} said that {s} would arrive early.",
]
FILLER = [
    "The weather was mild and the streets were quiet.",
    "A new market opened near the river in 2019.",
    "People gathered in the square after lunch!",
    "Nobody expected the train to be late again.",
    "The report was finished before the deadline.",
]


def generate_corpus(rng):
    occupations = list(OCCUPATIONS)
    docs = []
    for d in range(10):
        sentences = []
        for _ in range(10):
            if rng.random() < 0.2:
                sentences.append(rng.choice(FILLER))
                continue
            occ = rng.choice(occupations)
            female = rng.random() * 100 < OCCUPATIONS[occ]
            subject = rng.choice(SUBJECTS_F if female else SUBJECTS_M)
            text = rng.choice(TEMPLATES).format(s=subject, o=occ)
            sentences.append(text[0].upper() + text[1:])
        docs.append(" ".join(sentences))
    return docs


# Independent re-statement of the normalization contract.
def tokenize_document(text):
    sentences = re.split(r"(?<=[.!?])(?=\s|$)", text)
    out = []
    for s in sentences:
        tokens = [t.lower() for t in re.split(r"[^A-Za-z0-9]+", s) if t]
        if tokens:
            out.append(tokens)
    return out


def brute_force_counts(docs, vocab, targets):
    rows = {name: {} for name in targets}
    totals = {name: 0 for name in targets}
    marginals = {w: 0 for w in vocab}
    owner = {w: name for name, words in targets.items() for w in words}
    events = 0
    for sentences in docs:
        for sent in sentences:
            for i, t in enumerate(sent):
                for j, u in enumerate(sent):
                    if i == j or abs(i - j) > WINDOW:
                        continue
                    if t not in vocab or u not in vocab:
                        continue
                    marginals[t] += 1
                    events += 1
                    if t in owner:
                        name = owner[t]
                        rows[name][u] = rows[name].get(u, 0) + 1
                        totals[name] += 1
    return rows, totals, marginals, events


def write_counts(path, n_docs, kept, tokens, targets, rows, totals, marginals, events):
    lines = []
    lines.append(("config", "window", WINDOW))
    lines.append(("config", "sentence_boundaries", 1))
    lines.append(("config", "per_word", 0))
    lines.append(("corpus", "documents_read", n_docs))
    lines.append(("corpus", "documents_kept", kept))
    lines.append(("corpus", "records_skipped", 0))
    lines.append(("corpus", "tokens", tokens))
    lines.append(("corpus", "min_count", MIN_COUNT))
    lines.append(("corpus", "min_doc_tokens", MIN_DOC_TOKENS))
    for name, words in targets.items():
        lines.append(("set", name, *words))
    lines.append(("events", events))
    for name in sorted(rows):
        lines.append(("total", name, totals[name]))
        for word in sorted(rows[name]):
            lines.append(("pair", name, word, rows[name][word]))
    for word in sorted(marginals):
        lines.append(("marginal", word, marginals[word]))
    with open(path, "w", newline="\n") as f:
        f.write("pmibias-counts\t1\n")
        for rec in lines:
            f.write("\t".join(str(x) for x in rec) + "\n")
        f.write(f"end\t{len(lines)}\n")


def bh(p):
    m = len(p)
    order = sorted(range(m), key=lambda i: p[i])
    q = [0.0] * m
    running = 1.0
    for rank in range(m, 0, -1):
        i = order[rank - 1]
        running = min(running, p[i] * m / rank)
        q[i] = running
    return q


def pearson(x, y, w=None):
    w = w or [1.0] * len(x)
    sw = sum(w)
    mx = sum(wi * xi for wi, xi in zip(w, x)) / sw
    my = sum(wi * yi for wi, yi in zip(w, y)) / sw
    sxy = sum(wi * (xi - mx) * (yi - my) for wi, xi, yi in zip(w, x, y))
    sxx = sum(wi * (xi - mx) ** 2 for wi, xi in zip(w, x))
    syy = sum(wi * (yi - my) ** 2 for wi, yi in zip(w, y))
    return sxy / math.sqrt(sxx * syy)


def main():
    rng = random.Random(SEED)
    raw = generate_corpus(rng)
    with open("corpus.txt", "w", newline="\n") as f:
        for doc in raw:
            f.write(doc + "\n")

    word_lists = {"A": FEMALE, "B": MALE, "C": {o: [o] for o in OCCUPATIONS}}
    word_lists["C"]["healthcare"] = ["nurse", "doctor"]
    word_lists["C"]["astronaut"] = ["astronaut"]
    with open("wordlists.json", "w", newline="\n") as f:
        json.dump(word_lists, f, indent=2)
        f.write("\n")

    with open("truth.csv", "w", newline="\n") as f:
        f.write("label,percent_female\n")
        for o, pct in OCCUPATIONS.items():
            f.write(f"{o},{pct}\n")

    docs = [tokenize_document(d) for d in raw]
    kept = [d for d in docs if sum(len(s) for s in d) >= MIN_DOC_TOKENS]
    freq = {}
    for d in kept:
        for s in d:
            for t in s:
                freq[t] = freq.get(t, 0) + 1
    vocab = {w for w, c in freq.items() if c >= MIN_COUNT}
    tokens = sum(freq.values())

    targets = {"A": FEMALE, "B": MALE}
    rows, totals, marginals, events = brute_force_counts(kept, vocab, targets)
    write_counts("golden_counts.tsv", len(raw), len(kept), tokens, targets, rows, totals,
                 marginals, events)

    # Expected bias rows: log odds ratio with the four-cell SE at 95%.
    z = NormalDist().inv_cdf(0.975)
    expected = []
    for name, words in word_lists["C"].items():
        words = set(words)
        a = sum(rows["A"].get(w, 0) for w in words)
        c = sum(rows["B"].get(w, 0) for w in words)
        b = totals["A"] - a
        d = totals["B"] - c
        in_vocab = any(w in vocab for w in words)
        if not in_vocab:
            expected.append((name, a, b, c, d, None, "undefined_context"))
            continue
        if min(a, b, c, d) == 0:
            expected.append((name, a, b, c, d, None, "degenerate"))
            continue
        bias = math.log(a * d / (b * c))
        se = math.sqrt(1 / a + 1 / b + 1 / c + 1 / d)
        p = math.erfc(abs(bias / se) / math.sqrt(2))
        expected.append((name, a, b, c, d, (bias, se, bias - z * se, bias + z * se, p), "-"))
    q = bh([e[5][4] for e in expected if e[5]])
    qi = iter(q)
    with open("expected_bias.tsv", "w", newline="\n") as f:
        f.write("context\tf_AC\tf_AnC\tf_BC\tf_BnC\tbias\tse\tci_low\tci_high\tp\tq\tflags\n")
        for name, a, b, c, d, est, flags in expected:
            vals = list(est) + [next(qi)] if est else ["nan"] * 6
            f.write("\t".join([name, str(a), str(b), str(c), str(d)] +
                              [repr(v) if isinstance(v, float) else v for v in vals] + [flags]) + "\n")

    truth = {o: pct / 100 for o, pct in OCCUPATIONS.items()}
    pts = [(truth[e[0]], e[5][0], e[5][1]) for e in expected if e[5] and e[0] in truth]
    x = [p[0] for p in pts]
    y = [p[1] for p in pts]
    w = [1 / p[2] ** 2 for p in pts]
    with open("expected_correlation.tsv", "w", newline="\n") as f:
        f.write(f"n\t{len(pts)}\nr\t{pearson(x, y)!r}\nweighted_r\t{pearson(x, y, w)!r}\n")


if __name__ == "__main__":
    main()
