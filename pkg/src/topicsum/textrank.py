"""Graph-based sentence ranking per topic cluster and summary assembly.

Sentences become TF-IDF (or mean word-embedding) vectors, pairwise cosine
similarity forms the graph, and a damped power iteration ranks sentences.
Clusters below the length threshold skip ranking and are included whole;
selected sentences are merged back in document order.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .cleaning import CleaningContext
from .clustering import TopicClusterSet
from .errors import ConfigurationError
from .vocabulary import TokenDictionary

logger = logging.getLogger(__name__)

SIMILARITY_MODES = ("tfidf", "embedding")


@dataclass(frozen=True)
class TextRankConfig:
    damping: float = 0.85
    tol: float = 1e-6
    max_iter: int = 100
    top_n: int = 1
    min_cluster_sentences: int = 3
    similarity_mode: str = "tfidf"

    def __post_init__(self):
        if not 0.0 < self.damping < 1.0:
            raise ConfigurationError(f"damping must be in (0, 1), got {self.damping}")
        if self.tol <= 0 or self.max_iter < 1:
            raise ConfigurationError("tol must be positive and max_iter >= 1")
        if self.top_n < 1 or self.min_cluster_sentences < 1:
            raise ConfigurationError("top_n and min_cluster_sentences must be >= 1")
        if self.similarity_mode not in SIMILARITY_MODES:
            raise ConfigurationError(
                f"similarity_mode must be one of {SIMILARITY_MODES}")


@dataclass(frozen=True)
class SummaryContext:
    """Everything sentence vectorization needs: the training-time cleaner,
    the dictionary (document frequencies drive IDF), and an optional
    embedding table."""

    cleaner: CleaningContext
    dictionary: TokenDictionary | None = None
    embeddings: dict[str, list[float]] | None = None


@dataclass(frozen=True)
class SentenceProvenance:
    sentence_index: int
    topic_id: int
    rank: int


@dataclass(frozen=True)
class ExtractiveSummary:
    """Verbatim source sentences in document order, with the topic and rank
    that selected each one."""

    doc_id: str
    sentences: list[tuple[int, str]]
    provenance: list[SentenceProvenance] = field(default_factory=list)

    @property
    def text(self) -> str:
        return "\n".join(text for _, text in self.sentences)


def load_embedding_table(path) -> dict[str, list[float]]:
    """Plain-text embeddings, one 'token v1 v2 ... vd' entry per line; the
    dimension is fixed by the first line."""
    table: dict[str, list[float]] = {}
    dim = None
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            parts = line.rstrip("\n").split(" ")
            if len(parts) < 2:
                continue
            token, values = parts[0], parts[1:]
            if dim is None:
                dim = len(values)
            elif len(values) != dim:
                raise ConfigurationError(
                    f"embedding line {line_no}: expected {dim} values, "
                    f"got {len(values)}")
            table[token] = [float(v) for v in values]
    if not table:
        raise ConfigurationError(f"embedding table {path} is empty")
    return table


def sentence_vectors(sentences: list[str], mode: str,
                     context: SummaryContext):
    """Vectorize sentences for similarity.

    tfidf mode: sparse {token_id: tf * idf} dicts over the cleaned tokens,
    IDF taken from the training dictionary. embedding mode: dense mean of
    the word vectors of in-table cleaned tokens, all-zero when none is in
    the table.
    """
    if mode == "tfidf":
        if context.dictionary is None:
            raise ConfigurationError("tfidf mode needs a dictionary in the context")
        return [_tfidf_vector(s, context) for s in sentences]
    if mode == "embedding":
        if context.embeddings is None:
            raise ConfigurationError("embedding mode needs a loaded embedding table")
        return [_embedding_vector(s, context) for s in sentences]
    raise ConfigurationError(f"unknown similarity mode {mode!r}")


def _tfidf_vector(sentence: str, context: SummaryContext) -> dict[int, float]:
    dictionary = context.dictionary
    counts: dict[int, int] = {}
    for tok in context.cleaner.clean(sentence).tokens:
        idx = dictionary.token_to_id.get(tok)
        if idx is not None:
            counts[idx] = counts.get(idx, 0) + 1
    num_docs = max(dictionary.num_docs, 1)
    vector = {}
    for idx, tf in counts.items():
        idf = math.log((1.0 + num_docs) / (1.0 + dictionary.doc_freq[idx])) + 1.0
        vector[idx] = tf * idf
    return vector


def _embedding_vector(sentence: str, context: SummaryContext) -> list[float]:
    table = context.embeddings
    hits = [table[tok] for tok in context.cleaner.clean(sentence).tokens
            if tok in table]
    if not hits:
        dim = len(next(iter(table.values())))
        return [0.0] * dim
    dim = len(hits[0])
    return [sum(vec[i] for vec in hits) / len(hits) for i in range(dim)]


def _cosine(u, v) -> float:
    if isinstance(u, dict):
        nu = math.sqrt(sum(x * x for x in u.values()))
        nv = math.sqrt(sum(x * x for x in v.values()))
        if nu == 0.0 or nv == 0.0:
            return 0.0
        if len(u) > len(v):
            u, v = v, u
        dot = sum(x * v[i] for i, x in u.items() if i in v)
        return dot / (nu * nv)
    nu = math.sqrt(sum(x * x for x in u))
    nv = math.sqrt(sum(x * x for x in v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return sum(a * b for a, b in zip(u, v)) / (nu * nv)


def similarity_matrix(vectors) -> np.ndarray:
    """Pairwise cosine similarity, negatives clamped to 0, zero diagonal."""
    n = len(vectors)
    sim = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            value = max(0.0, _cosine(vectors[i], vectors[j]))
            sim[i, j] = value
            sim[j, i] = value
    return sim


@dataclass(frozen=True)
class RankResult:
    scores: np.ndarray
    converged: bool
    iterations: int


def textrank_scores(sim: np.ndarray, config: TextRankConfig) -> RankResult:
    """Damped PageRank over the similarity graph.

    Rows are normalized into transition weights (all-zero rows become
    uniform, the standard dangling-node fix), and r is iterated from the
    uniform start until the L1 change drops below tol. The result sums
    to 1; non-convergence at max_iter returns the last iterate with the
    flag cleared.
    """
    n = sim.shape[0]
    if n == 0:
        raise ConfigurationError("similarity matrix is empty")
    if n == 1:
        return RankResult(scores=np.ones(1), converged=True, iterations=0)
    row_sums = sim.sum(axis=1)
    weights = np.empty_like(sim, dtype=float)
    for i in range(n):
        if row_sums[i] > 0.0:
            weights[i] = sim[i] / row_sums[i]
        else:
            weights[i] = 1.0 / n
    damping = config.damping
    teleport = (1.0 - damping) / n
    r = np.full(n, 1.0 / n)
    transposed = weights.T
    for iteration in range(1, config.max_iter + 1):
        r_next = teleport + damping * (transposed @ r)
        if np.abs(r_next - r).sum() < config.tol:
            return RankResult(scores=r_next, converged=True, iterations=iteration)
        r = r_next
    logger.warning("textrank did not converge in %d iterations", config.max_iter)
    return RankResult(scores=r, converged=False, iterations=config.max_iter)


def summarize_cluster(cluster: list[tuple[int, str]], config: TextRankConfig,
                      context: SummaryContext) -> list[tuple[int, str]]:
    """Pick the cluster's summary sentences.

    Clusters shorter than the threshold are returned whole. Otherwise the
    top_n sentences by rank score are returned in document order, ties
    broken toward the earlier sentence.
    """
    if not cluster:
        raise ConfigurationError("cannot summarize an empty cluster")
    if len(cluster) < config.min_cluster_sentences:
        return list(cluster)
    texts = [text for _, text in cluster]
    vectors = sentence_vectors(texts, config.similarity_mode, context)
    result = textrank_scores(similarity_matrix(vectors), config)
    ranked = sorted(range(len(cluster)),
                    key=lambda i: (-result.scores[i], cluster[i][0]))
    chosen = sorted(ranked[:config.top_n])
    return [cluster[i] for i in chosen]


def assemble_summary(cluster_set: TopicClusterSet, config: TextRankConfig,
                     context: SummaryContext) -> ExtractiveSummary:
    """Summarize every non-empty cluster in ascending topic order and merge
    the selections into one document-ordered summary."""
    if not cluster_set.present_topics:
        logger.warning("document %r has no clusters; emitting empty summary",
                       cluster_set.doc_id)
        return ExtractiveSummary(doc_id=cluster_set.doc_id, sentences=[])
    picked: dict[int, tuple[str, SentenceProvenance]] = {}
    for topic_id in cluster_set.present_topics:
        cluster = cluster_set.clusters[topic_id]
        selection = summarize_cluster(cluster, config, context)
        for rank, (index, text) in enumerate(selection):
            if index not in picked:
                picked[index] = (text, SentenceProvenance(
                    sentence_index=index, topic_id=topic_id, rank=rank))
    ordered = sorted(picked)
    return ExtractiveSummary(
        doc_id=cluster_set.doc_id,
        sentences=[(i, picked[i][0]) for i in ordered],
        provenance=[picked[i][1] for i in ordered],
    )
