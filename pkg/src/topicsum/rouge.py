"""ROUGE metrics: n-gram overlap, LCS, weighted LCS, and skip-bigram
variants, each reported as precision / recall / F1.

The evaluation tokenizer is independent of the modeling cleaner: it
lowercases and splits on alphanumeric runs but keeps stopwords, because the
metric must see the surface text. Counts are clipped: a candidate n-gram is
credited at most as often as it occurs in the reference.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from .cleaning import lemma, segment_sentences
from .errors import ConfigurationError

METRIC_CHOICES = ("r1", "r2", "r3", "r4", "rl", "rw", "rs", "rsu")

_DEFAULT_PATTERN = r"[a-z0-9]+"


@dataclass(frozen=True)
class EvalTokenization:
    """Tokenizer settings, applied identically to candidate and reference."""

    lowercase: bool = True
    pattern: str = _DEFAULT_PATTERN
    stem: bool = False

    def tokenize(self, text: str) -> list[str]:
        if self.lowercase:
            text = text.lower()
        tokens = re.findall(self.pattern, text)
        if self.stem:
            tokens = [lemma(t) for t in tokens]
        return tokens


DEFAULT_TOKENIZATION = EvalTokenization()


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float
    degenerate: bool = False

    @classmethod
    def from_pr(cls, precision: float, recall: float,
                degenerate: bool = False) -> "RougeScore":
        if precision == recall:
            # exact, and keeps f1 inside [min(P,R), max(P,R)] where the
            # harmonic-mean formula can overshoot by one ulp
            f1 = precision
        elif precision + recall > 0.0:
            f1 = 2.0 * precision * recall / (precision + recall)
        else:
            f1 = 0.0
        return cls(precision=precision, recall=recall, f1=f1,
                   degenerate=degenerate)

    @classmethod
    def zero(cls, degenerate: bool = True) -> "RougeScore":
        return cls(0.0, 0.0, 0.0, degenerate=degenerate)


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: str, reference: str, n: int,
            tok: EvalTokenization = DEFAULT_TOKENIZATION) -> RougeScore:
    """Clipped n-gram overlap. Recall divides by the reference n-gram count
    (the recall-oriented reading), precision by the candidate's."""
    if n < 1:
        raise ConfigurationError(f"n must be >= 1, got {n}")
    cand = tok.tokenize(candidate)
    ref = tok.tokenize(reference)
    ref_grams = _ngrams(ref, n)
    cand_grams = _ngrams(cand, n)
    ref_total = sum(ref_grams.values())
    cand_total = sum(cand_grams.values())
    if ref_total == 0 or cand_total == 0:
        return RougeScore.zero()
    matches = sum((cand_grams & ref_grams).values())
    return RougeScore.from_pr(matches / cand_total, matches / ref_total)


def _lcs_table(ref: list[str], cand: list[str]) -> list[list[int]]:
    m, n = len(ref), len(cand)
    dp = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        token = ref[i - 1]
        row = dp[i]
        prev = dp[i - 1]
        for j in range(1, n + 1):
            if token == cand[j - 1]:
                row[j] = prev[j - 1] + 1
            else:
                up = prev[j]
                left = row[j - 1]
                row[j] = up if up >= left else left
    return dp


def lcs_length(a: list[str], b: list[str]) -> int:
    return _lcs_table(a, b)[len(a)][len(b)]


def _lcs_ref_positions(ref: list[str], cand: list[str]) -> set[int]:
    """Reference-side token positions on one LCS of (ref, cand), using a
    deterministic backtrace (prefer the match, then the shorter reference)."""
    dp = _lcs_table(ref, cand)
    positions: set[int] = set()
    i, j = len(ref), len(cand)
    while i > 0 and j > 0:
        if ref[i - 1] == cand[j - 1] and dp[i][j] == dp[i - 1][j - 1] + 1:
            positions.add(i - 1)
            i -= 1
            j -= 1
        elif dp[i - 1][j] >= dp[i][j - 1]:
            i -= 1
        else:
            j -= 1
    return positions


def rouge_l(candidate: str, reference: str,
            tok: EvalTokenization = DEFAULT_TOKENIZATION) -> RougeScore:
    """Summary-level LCS: per reference sentence, the union of LCS-matched
    token positions against every candidate sentence; totals divide by the
    full reference / candidate token counts.

    Matched tokens are clipped against the candidate's token multiplicities
    (several reference sentences matching the same candidate words share the
    credit), which keeps precision inside [0, 1]."""
    cand_sentences = [tok.tokenize(t) for t in segment_sentences(candidate).texts] \
        if candidate.strip() else []
    ref_sentences = [tok.tokenize(t) for t in segment_sentences(reference).texts] \
        if reference.strip() else []
    cand_sentences = [s for s in cand_sentences if s]
    ref_sentences = [s for s in ref_sentences if s]
    ref_total = sum(len(s) for s in ref_sentences)
    cand_total = sum(len(s) for s in cand_sentences)
    if ref_total == 0 or cand_total == 0:
        return RougeScore.zero()
    matched: Counter = Counter()
    for ref_tokens in ref_sentences:
        hit: set[int] = set()
        for cand_tokens in cand_sentences:
            hit |= _lcs_ref_positions(ref_tokens, cand_tokens)
        matched.update(ref_tokens[i] for i in hit)
    cand_counts: Counter = Counter()
    for cand_tokens in cand_sentences:
        cand_counts.update(cand_tokens)
    union_size = sum((matched & cand_counts).values())
    return RougeScore.from_pr(union_size / cand_total, union_size / ref_total)


def _wlcs(x: list[str], y: list[str], exponent: float) -> float:
    """Weighted LCS rewarding consecutive runs: a run of length k scores
    k ** exponent."""
    m, n = len(x), len(y)
    c = [[0.0] * (n + 1) for _ in range(m + 1)]
    runs = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        token = x[i - 1]
        for j in range(1, n + 1):
            if token == y[j - 1]:
                k = runs[i - 1][j - 1]
                # parenthesized increment: the same rounding order as
                # _wlcs_ceiling, so identity pairs normalize to exactly 1
                c[i][j] = c[i - 1][j - 1] + ((k + 1) ** exponent - k ** exponent)
                runs[i][j] = k + 1
            else:
                c[i][j] = c[i - 1][j] if c[i - 1][j] > c[i][j - 1] else c[i][j - 1]
                runs[i][j] = 0
    return c[m][n]


def _wlcs_ceiling(length: int, exponent: float) -> float:
    """Best possible WLCS of a length-m sequence against itself, accumulated
    with the same float operations as the dynamic program, so an identity
    pair normalizes to exactly 1.0."""
    total = 0.0
    for k in range(length):
        total += (k + 1) ** exponent - k ** exponent
    return total


def rouge_w(candidate: str, reference: str, weight_exponent: float = 1.2,
            tok: EvalTokenization = DEFAULT_TOKENIZATION) -> RougeScore:
    """Weighted LCS score. With weight_exponent = 1 this degenerates to the
    plain LCS ratio."""
    if weight_exponent < 1.0:
        raise ConfigurationError("weight_exponent must be >= 1")
    cand = tok.tokenize(candidate)
    ref = tok.tokenize(reference)
    if not cand or not ref:
        return RougeScore.zero()
    score = _wlcs(ref, cand, weight_exponent)
    inverse = 1.0 / weight_exponent
    recall = min(1.0, score / _wlcs_ceiling(len(ref), weight_exponent)) ** inverse
    precision = min(1.0, score / _wlcs_ceiling(len(cand), weight_exponent)) ** inverse
    return RougeScore.from_pr(precision, recall)


def _skip_bigrams(tokens: list[str], max_skip: int | None) -> Counter:
    pairs: Counter = Counter()
    n = len(tokens)
    for i in range(n):
        stop = n if max_skip is None else min(n, i + max_skip + 2)
        for j in range(i + 1, stop):
            pairs[(tokens[i], tokens[j])] += 1
    return pairs


def rouge_s(candidate: str, reference: str, max_skip: int | None = None,
            tok: EvalTokenization = DEFAULT_TOKENIZATION) -> RougeScore:
    """Skip-bigram overlap: ordered in-sentence pairs with at most max_skip
    intervening tokens (unlimited when None), clipped counts."""
    cand = tok.tokenize(candidate)
    ref = tok.tokenize(reference)
    if len(cand) < 2 or len(ref) < 2:
        return RougeScore.zero()
    cand_pairs = _skip_bigrams(cand, max_skip)
    ref_pairs = _skip_bigrams(ref, max_skip)
    matches = sum((cand_pairs & ref_pairs).values())
    return RougeScore.from_pr(matches / sum(cand_pairs.values()),
                              matches / sum(ref_pairs.values()))


_BEGIN_MARKER = "\x02begin\x02"


def rouge_su(candidate: str, reference: str, max_skip: int | None = None,
             tok: EvalTokenization = DEFAULT_TOKENIZATION) -> RougeScore:
    """Skip-bigrams extended with unigram matches, implemented by
    prepending a begin marker to both token sequences."""
    cand = tok.tokenize(candidate)
    ref = tok.tokenize(reference)
    if not cand or not ref:
        return RougeScore.zero()
    cand = [_BEGIN_MARKER] + cand
    ref = [_BEGIN_MARKER] + ref
    cand_pairs = _skip_bigrams(cand, max_skip)
    ref_pairs = _skip_bigrams(ref, max_skip)
    matches = sum((cand_pairs & ref_pairs).values())
    return RougeScore.from_pr(matches / sum(cand_pairs.values()),
                              matches / sum(ref_pairs.values()))


def aggregate(scores: list[RougeScore]) -> RougeScore:
    """Arithmetic mean of precision, recall, and F1 across documents."""
    if not scores:
        raise ConfigurationError("cannot aggregate an empty score list")
    n = len(scores)
    return RougeScore(
        precision=sum(s.precision for s in scores) / n,
        recall=sum(s.recall for s in scores) / n,
        f1=sum(s.f1 for s in scores) / n,
    )


def score_pair(candidate: str, reference: str, metrics=METRIC_CHOICES,
               tok: EvalTokenization = DEFAULT_TOKENIZATION,
               max_skip: int | None = None) -> dict[str, RougeScore]:
    """All requested metrics for one (candidate, reference) pair. Metric
    names follow the CLI flags: r1..r4, rl, rw, rs, rsu."""
    out: dict[str, RougeScore] = {}
    for name in metrics:
        if name not in METRIC_CHOICES:
            raise ConfigurationError(f"unknown metric {name!r}; "
                                     f"choices are {', '.join(METRIC_CHOICES)}")
        if name.startswith("r") and name[1:].isdigit():
            out[name] = rouge_n(candidate, reference, int(name[1:]), tok)
        elif name == "rl":
            out[name] = rouge_l(candidate, reference, tok)
        elif name == "rw":
            out[name] = rouge_w(candidate, reference, tok=tok)
        elif name == "rs":
            out[name] = rouge_s(candidate, reference, max_skip, tok)
        elif name == "rsu":
            out[name] = rouge_su(candidate, reference, max_skip, tok)
    return out
