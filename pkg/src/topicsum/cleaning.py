"""Document cleaning: sentence segmentation, tokenization, phrase joining,
and lemmatization with a part-of-speech filter.

The cleaning pipeline feeding the topic model is the composition

    strip_and_tokenize -> apply_phrases -> lemmatize_filter

applied by :func:`clean_document`. Sentence segmentation is separate and
operates on the raw article text, so downstream sentence clusters quote the
source verbatim.

All word lists (stopwords, abbreviations, inflection exceptions, coarse POS
tags) are bundled resource files so results are reproducible without any
external model downloads.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources

from .errors import ConfigurationError

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_TERMINATOR_RE = re.compile(r"[.!?]+")
_WORD_BEFORE_DOT_RE = re.compile(r"([A-Za-z][A-Za-z.]*)$")

_VOWELS = "aeiou"
# final doubled consonants produced by -ing/-ed doubling (running, stopped)
_UNDOUBLE = set("bdgmnprt")
# stems ending in obstruent+l need a restored 'e' (tangl -> tangle)
_OBSTRUENTS = set("bcdfgkptz")
# 'll' stems that really are single-l words ("controlling" -> "control")
_LL_UNDOUBLE = {
    "controll", "travell", "cancell", "labell", "levell", "modell",
    "signall", "spirall", "totall", "equall", "fuell", "quarrell", "panell",
}

ALLOWED_POS = frozenset("nvar")


def _read_resource(name: str) -> list[str]:
    text = resources.files("topicsum.resources").joinpath(name).read_text("utf-8")
    lines = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            lines.append(line)
    return lines


def load_stopwords() -> frozenset[str]:
    """Bundled English stopword list (version 1)."""
    return frozenset(_read_resource("stopwords.txt"))


def load_abbreviations() -> frozenset[str]:
    """Abbreviations whose trailing period never ends a sentence."""
    return frozenset(_read_resource("abbreviations.txt"))


def _load_lemma_exceptions() -> dict[str, str]:
    table = {}
    for line in _read_resource("lemma_exceptions.tsv"):
        form, _, lemma = line.partition("\t")
        table[form] = lemma
    return table


def _load_pos_lexicon() -> dict[str, str]:
    table = {}
    for line in _read_resource("pos_lexicon.tsv"):
        form, _, tag = line.partition("\t")
        table[form] = tag
    return table


_LEMMA_EXCEPTIONS = _load_lemma_exceptions()
_POS_LEXICON = _load_pos_lexicon()
_ABBREVIATIONS = load_abbreviations()


@dataclass(frozen=True)
class SentenceGroup:
    """Ordered sentences of one document as (index, text) pairs."""

    doc_id: str
    sentences: list[tuple[int, str]]

    @property
    def texts(self) -> list[str]:
        return [text for _, text in self.sentences]

    def __len__(self) -> int:
        return len(self.sentences)


@dataclass(frozen=True)
class CleanedDoc:
    """Lemma token sequence of one document, ready for topic modeling.

    Tokens are lowercase [a-z0-9_]+ strings; multiword phrases are joined
    with underscores. No token is a stopword.
    """

    doc_id: str
    tokens: list[str]


@dataclass(frozen=True)
class PhraseModel:
    """Retained adjacent-token pairs with their counts and scores.

    Pairs come from two learning rounds, so entries can join a previously
    joined token with a following word ("new_york" + "city").
    """

    min_count: int
    threshold: float
    pair_scores: dict[tuple[str, str], float] = field(default_factory=dict)
    pair_counts: dict[tuple[str, str], int] = field(default_factory=dict)

    @classmethod
    def empty(cls, min_count: int = 5, threshold: float = 10.0) -> "PhraseModel":
        return cls(min_count=min_count, threshold=threshold)

    def save(self, path) -> None:
        """Write tab-separated (pair, count, score) lines."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"#phrases\tmin_count={self.min_count}\tthreshold={self.threshold!r}\n")
            for (a, b), score in sorted(self.pair_scores.items()):
                count = self.pair_counts.get((a, b), 0)
                fh.write(f"{a} {b}\t{count}\t{score!r}\n")

    @classmethod
    def load(cls, path) -> "PhraseModel":
        min_count, threshold = 5, 10.0
        scores: dict[tuple[str, str], float] = {}
        counts: dict[tuple[str, str], int] = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                if line.startswith("#phrases"):
                    for part in line.split("\t")[1:]:
                        key, _, value = part.partition("=")
                        if key == "min_count":
                            min_count = int(value)
                        elif key == "threshold":
                            threshold = float(value)
                    continue
                pair_text, count_text, score_text = line.split("\t")
                a, b = pair_text.split(" ")
                counts[(a, b)] = int(count_text)
                scores[(a, b)] = float(score_text)
        return cls(min_count=min_count, threshold=threshold,
                   pair_scores=scores, pair_counts=counts)


def segment_sentences(article: str, doc_id: str = "") -> SentenceGroup:
    """Split an article into sentences on ./!/? with abbreviation and
    decimal guards. Newlines are hard boundaries. Sentence text is kept
    verbatim apart from surrounding whitespace; an article with no
    terminator comes back as a single sentence.
    """
    boundaries = []
    for match in _TERMINATOR_RE.finditer(article):
        end = match.end()
        if end < len(article) and not article[end].isspace():
            # mid-token punctuation: decimals ("3.5"), urls, "e.g.x"
            continue
        if match.group().endswith("."):
            before = _WORD_BEFORE_DOT_RE.search(article, 0, match.end() - 1)
            if before and before.group(1).lower().strip(".") in _ABBREVIATIONS:
                continue
        boundaries.append(end)
    pieces = []
    start = 0
    for end in boundaries:
        pieces.append(article[start:end])
        start = end
    pieces.append(article[start:])
    sentences: list[tuple[int, str]] = []
    for piece in pieces:
        # newline splits cover headings and list items with no terminator
        for line in piece.split("\n"):
            line = line.strip()
            if line:
                sentences.append((len(sentences), line))
    if not sentences:
        stripped = article.strip()
        if stripped:
            sentences.append((0, stripped))
    return SentenceGroup(doc_id=doc_id, sentences=sentences)


def fold_ascii(text: str) -> str:
    """Fold accented characters to their ASCII base form."""
    decomposed = unicodedata.normalize("NFKD", text)
    return decomposed.encode("ascii", "ignore").decode("ascii")


def strip_and_tokenize(text: str, stopwords: frozenset[str] | set[str]) -> list[str]:
    """Lowercase, fold accents, split on non-alphanumerics, drop stopwords."""
    folded = fold_ascii(text).lower()
    return [t for t in _TOKEN_RE.findall(folded) if t not in stopwords]


def score_pair(pair_count: int, a_count: int, b_count: int,
               vocab_size: int, min_count: int) -> float:
    """Pointwise phrase score: (count(a,b) - min_count) * V / (count(a) * count(b))."""
    return (pair_count - min_count) * vocab_size / (a_count * b_count)


def _learn_round(corpus: list[list[str]], min_count: int,
                 threshold: float) -> tuple[dict[tuple[str, str], float],
                                            dict[tuple[str, str], int]]:
    token_counts: dict[str, int] = {}
    pair_counts: dict[tuple[str, str], int] = {}
    for tokens in corpus:
        for tok in tokens:
            token_counts[tok] = token_counts.get(tok, 0) + 1
        for a, b in zip(tokens, tokens[1:]):
            pair_counts[(a, b)] = pair_counts.get((a, b), 0) + 1
    vocab_size = len(token_counts)
    scores: dict[tuple[str, str], float] = {}
    counts: dict[tuple[str, str], int] = {}
    for (a, b), count in pair_counts.items():
        if count < min_count:
            continue
        score = score_pair(count, token_counts[a], token_counts[b],
                           vocab_size, min_count)
        if score >= threshold:
            scores[(a, b)] = score
            counts[(a, b)] = count
    return scores, counts


def learn_phrases(corpus: list[list[str]], min_count: int = 5,
                  threshold: float = 10.0) -> PhraseModel:
    """Learn bigram pairs, then a second round over the bigram-joined corpus
    so three-word phrases can form. Both rounds' retained pairs share one
    model.
    """
    if min_count < 1:
        raise ConfigurationError(f"min_count must be >= 1, got {min_count}")
    if not corpus or all(not tokens for tokens in corpus):
        raise ConfigurationError("phrase corpus is empty")
    scores, counts = _learn_round(corpus, min_count, threshold)
    first_round = PhraseModel(min_count=min_count, threshold=threshold,
                              pair_scores=scores, pair_counts=counts)
    joined = [_apply_single_pass(tokens, first_round.pair_scores)
              for tokens in corpus]
    scores2, counts2 = _learn_round(joined, min_count, threshold)
    for pair, score in scores2.items():
        if pair not in scores:
            scores[pair] = score
            counts[pair] = counts2[pair]
    return PhraseModel(min_count=min_count, threshold=threshold,
                       pair_scores=scores, pair_counts=counts)


def _apply_single_pass(tokens: list[str],
                       pairs: dict[tuple[str, str], float]) -> list[str]:
    out = []
    i = 0
    n = len(tokens)
    while i < n:
        if i + 1 < n and (tokens[i], tokens[i + 1]) in pairs:
            out.append(tokens[i] + "_" + tokens[i + 1])
            i += 2
        else:
            out.append(tokens[i])
            i += 1
    return out


def apply_phrases(tokens: list[str], model: PhraseModel) -> list[str]:
    """Greedy left-to-right, non-overlapping pair joining, run twice so
    trigrams form from bigram output."""
    once = _apply_single_pass(tokens, model.pair_scores)
    return _apply_single_pass(once, model.pair_scores)


def pos_tag(token: str) -> str:
    """Coarse POS from the bundled lexicon; unknown words default to noun."""
    return _POS_LEXICON.get(token, "n")


def _restore_e(stem: str) -> str:
    if len(stem) >= 2 and stem[-1] == "l" and stem[-2] in _OBSTRUENTS:
        return stem + "e"
    if len(stem) <= 3:
        if stem[-1] not in "aeiouwxy":
            return stem + "e"
        return stem
    if (stem[-1] not in _VOWELS and stem[-1] not in "wxy"
            and stem[-2] in _VOWELS and stem[-3] not in _VOWELS):
        # single-syllable CVC stems take an 'e' (mak -> make); longer stems
        # with several vowel groups (open, water) are left alone
        groups = len(re.findall(r"[aeiou]+", stem))
        if groups == 1:
            return stem + "e"
    return stem


def _strip_inflection(stem: str) -> str:
    if len(stem) >= 3 and stem[-1] == stem[-2]:
        if stem[-1] in _UNDOUBLE:
            return stem[:-1]
        if stem.endswith("ll") and stem in _LL_UNDOUBLE:
            return stem[:-1]
        return stem
    return _restore_e(stem)


def lemma(token: str) -> str:
    """Map a token to its root form via the bundled exception lexicon with
    suffix-stripping rules as fallback. Phrase tokens (containing '_') and
    very short tokens pass through unchanged.
    """
    if "_" in token or len(token) <= 3 or not token.isalpha():
        return _LEMMA_EXCEPTIONS.get(token, token)
    hit = _LEMMA_EXCEPTIONS.get(token)
    if hit is not None:
        return hit
    if token.endswith("ies") and len(token) > 4:
        return token[:-3] + "y"
    if token.endswith("sses"):
        return token[:-2]
    if token.endswith(("xes", "zes", "ches", "shes", "oes")):
        return token[:-2]
    if token.endswith("ss") or token.endswith("us") or token.endswith("is"):
        return token
    if token.endswith("s") and not token.endswith("es"):
        return token[:-1]
    if token.endswith("es"):
        return token[:-1]
    if token.endswith("ing") and len(token) >= 5:
        return _strip_inflection(token[:-3])
    if token.endswith("ied") and len(token) >= 5:
        return token[:-3] + "y"
    if token.endswith("ed") and len(token) >= 5:
        return _strip_inflection(token[:-2])
    return token


def lemmatize_filter(tokens: list[str]) -> list[str]:
    """Lemmatize each token and keep only nouns, verbs, adjectives and
    adverbs (coarse tags; unknown words count as nouns)."""
    out = []
    for tok in tokens:
        if "_" in tok:
            out.append(tok)
            continue
        if pos_tag(tok) not in ALLOWED_POS:
            continue
        out.append(lemma(tok))
    return out


def clean_document(article: str, stopwords: frozenset[str] | set[str],
                   phrases: PhraseModel, doc_id: str = "") -> CleanedDoc:
    """Full cleaning pipeline for one document.

    Lemmatization can surface a stopword ("cans" -> "can"), so the stopword
    filter runs once more at the end to keep the output invariant (no
    stopwords, ever) and the pipeline idempotent on its own output.
    """
    tokens = strip_and_tokenize(article, stopwords)
    tokens = apply_phrases(tokens, phrases)
    tokens = lemmatize_filter(tokens)
    tokens = [t for t in tokens if t not in stopwords]
    return CleanedDoc(doc_id=doc_id, tokens=tokens)


@dataclass(frozen=True)
class CleaningContext:
    """The stopword list and phrase model fixed at training time, reused for
    every later sentence-level cleaning call."""

    stopwords: frozenset[str]
    phrases: PhraseModel

    @classmethod
    def default(cls) -> "CleaningContext":
        return cls(stopwords=load_stopwords(), phrases=PhraseModel.empty())

    def clean(self, text: str, doc_id: str = "") -> CleanedDoc:
        return clean_document(text, self.stopwords, self.phrases, doc_id=doc_id)
