"""Latent Dirichlet Allocation trained by collapsed Gibbs sampling.

Every token occurrence carries a topic assignment z. One sweep resamples
each token's topic from

    p(z = k) is proportional to (n_dk[d][k] + alpha) * (n_kw[k][w] + beta)
                                / (n_k[k] + V * beta)

with the token's own current assignment excluded from all counts. The
topic-word distribution phi and document-topic distribution theta are
derived from the count tables:

    phi[k][w]   = (n_kw[k][w] + beta) / (n_k[k] + V * beta)
    theta[d][k] = (n_dk[d][k] + alpha) / (n_d[d] + K * alpha)

Unseen text is handled by fold-in Gibbs: the topic-word counts stay frozen
and only a local document-topic table is resampled.

The sampler is deliberately plain Python over flat lists: at the corpus
sizes this package targets it is faster than per-token numpy dispatch, and
the count tables stay exactly integer so the brute-force recount invariant
can be checked bit-for-bit.
"""

from __future__ import annotations

import json
import logging
import math
import random
from bisect import bisect_right
from dataclasses import dataclass

from .errors import ConfigurationError, EmptyCorpusError, IntegrityError
from .vocabulary import BowCorpus, TokenDictionary, expand_bag

logger = logging.getLogger(__name__)

MODEL_MAGIC = "topicsum-lda v1"


@dataclass(frozen=True)
class LdaConfig:
    """Sampler hyperparameters. ``alpha=None`` resolves to 50/K."""

    K: int = 20
    alpha: float | None = None
    beta: float = 0.01
    sweeps: int = 1000
    burn_in: int = 100
    seed: int = 13
    fold_sweeps: int = 20

    def __post_init__(self):
        if self.K < 1:
            raise ConfigurationError(f"K must be >= 1, got {self.K}")
        if self.alpha is None:
            object.__setattr__(self, "alpha", 50.0 / self.K)
        self.validate()

    def validate(self) -> None:
        if self.K < 1:
            raise ConfigurationError(f"K must be >= 1, got {self.K}")
        if self.alpha <= 0 or self.beta <= 0:
            raise ConfigurationError("alpha and beta must be positive")
        if self.sweeps < 1:
            raise ConfigurationError("sweeps must be >= 1")
        if not 0 <= self.burn_in < self.sweeps:
            raise ConfigurationError("burn_in must satisfy 0 <= burn_in < sweeps")
        if self.fold_sweeps < 1:
            raise ConfigurationError("fold_sweeps must be >= 1")

    def to_json_dict(self) -> dict:
        return {"K": self.K, "alpha": self.alpha, "beta": self.beta,
                "sweeps": self.sweeps, "burn_in": self.burn_in,
                "seed": self.seed, "fold_sweeps": self.fold_sweeps}

    @classmethod
    def from_json_dict(cls, data: dict) -> "LdaConfig":
        return cls(**data)


class LdaModel:
    """Count tables and per-token assignments of a (partially) trained model.

    Internally the topic-word table is stored word-major (``n_wk[w][k]``)
    because the sampler reads one word's topic vector per token; the
    word-per-topic view required by the public contract is available via
    :meth:`topic_word_counts`.
    """

    def __init__(self, config: LdaConfig, dictionary: TokenDictionary,
                 docs: list[list[int]]):
        self.config = config
        self.dictionary = dictionary
        self.V = dictionary.size
        K = config.K
        self.docs = docs
        self.n_wk = [[0] * K for _ in range(self.V)]
        self.n_k = [0] * K
        self.n_dk = [[0] * K for _ in range(len(docs))]
        self.n_d = [len(d) for d in docs]
        self.z: list[list[int]] = []
        self._rng = random.Random(config.seed)
        self.sweeps_run = 0

    # -- construction ------------------------------------------------------

    @classmethod
    def initialize(cls, corpus: BowCorpus, dictionary: TokenDictionary,
                   config: LdaConfig) -> "LdaModel":
        """Expand bags to token-id lists and assign topics uniformly at
        random from the config seed."""
        if dictionary.size < 1:
            raise ConfigurationError("vocabulary is empty")
        docs = [expand_bag(bag) for bag in corpus.docs]
        if not docs or all(not d for d in docs):
            raise EmptyCorpusError("cannot train on an empty corpus")
        total = sum(len(d) for d in docs)
        if config.K > total:
            logger.warning("K=%d exceeds corpus token count %d", config.K, total)
        model = cls(config, dictionary, docs)
        rng = model._rng
        K = config.K
        for d, words in enumerate(docs):
            zd = []
            nd = model.n_dk[d]
            for w in words:
                k = rng.randrange(K)
                zd.append(k)
                model.n_wk[w][k] += 1
                nd[k] += 1
                model.n_k[k] += 1
            model.z.append(zd)
        return model

    # -- training ----------------------------------------------------------

    def run_sweeps(self, n: int) -> None:
        """Run n full collapsed-Gibbs sweeps over every token."""
        K = self.config.K
        alpha = self.config.alpha
        beta = self.config.beta
        vbeta = self.V * beta
        n_k = self.n_k
        n_wk = self.n_wk
        cum = [0.0] * K
        rand = self._rng.random
        bisect = bisect_right
        topics = range(K)
        for _ in range(n):
            for d, words in enumerate(self.docs):
                nd = self.n_dk[d]
                zd = self.z[d]
                for i, w in enumerate(words):
                    k = zd[i]
                    nw = n_wk[w]
                    nw[k] -= 1
                    nd[k] -= 1
                    n_k[k] -= 1
                    total = 0.0
                    for kk in topics:
                        total += ((nd[kk] + alpha) * (nw[kk] + beta)
                                  / (n_k[kk] + vbeta))
                        cum[kk] = total
                    k = bisect(cum, rand() * total)
                    if k >= K:
                        k = K - 1
                    zd[i] = k
                    nw[k] += 1
                    nd[k] += 1
                    n_k[k] += 1
            self.sweeps_run += 1

    # -- derived quantities --------------------------------------------------

    def phi_row(self, k: int) -> list[float]:
        beta = self.config.beta
        denom = self.n_k[k] + self.V * beta
        return [(self.n_wk[w][k] + beta) / denom for w in range(self.V)]

    def phi(self) -> list[list[float]]:
        return [self.phi_row(k) for k in range(self.config.K)]

    def theta_row(self, d: int) -> list[float]:
        alpha = self.config.alpha
        denom = self.n_d[d] + self.config.K * alpha
        return [(c + alpha) / denom for c in self.n_dk[d]]

    def word_topic_weights(self, w: int) -> list[float]:
        """phi[:, w]: the per-topic probability of word id w."""
        beta = self.config.beta
        vbeta = self.V * beta
        nw = self.n_wk[w]
        return [(nw[k] + beta) / (self.n_k[k] + vbeta)
                for k in range(self.config.K)]

    def top_words(self, k: int, top_m: int) -> list[tuple[str, float]]:
        """Top-m (token, probability) of topic k, probability descending,
        ties broken toward the lower token id."""
        row = self.phi_row(k)
        order = sorted(range(self.V), key=lambda w: (-row[w], w))[:top_m]
        return [(self.dictionary.id_to_token[w], row[w]) for w in order]

    def topic_word_counts(self) -> list[list[int]]:
        """The K x V topic-word count table (transposed internal storage)."""
        K = self.config.K
        return [[self.n_wk[w][k] for w in range(self.V)] for k in range(K)]

    # -- integrity -----------------------------------------------------------

    def recount_tables(self):
        """Brute-force recount of all four count tables from z alone."""
        K = self.config.K
        n_kw = [[0] * self.V for _ in range(K)]
        n_k = [0] * K
        n_dk = [[0] * K for _ in range(len(self.docs))]
        n_d = [0] * len(self.docs)
        for d, words in enumerate(self.docs):
            zd = self.z[d]
            for i, w in enumerate(words):
                k = zd[i]
                n_kw[k][w] += 1
                n_k[k] += 1
                n_dk[d][k] += 1
                n_d[d] += 1
        return n_kw, n_k, n_dk, n_d

    def verify_counts(self) -> None:
        """Raise IntegrityError unless the stored tables equal a brute-force
        recount from z."""
        n_kw, n_k, n_dk, n_d = self.recount_tables()
        if n_kw != self.topic_word_counts():
            raise IntegrityError("topic-word counts diverge from z")
        if n_k != self.n_k:
            raise IntegrityError("per-topic totals diverge from z")
        if n_dk != self.n_dk:
            raise IntegrityError("document-topic counts diverge from z")
        if n_d != self.n_d:
            raise IntegrityError("per-document totals diverge from z")

    # -- persistence -----------------------------------------------------------

    def save(self, path) -> None:
        """Versioned flat file: magic, config, V, dictionary hash, n_k, and
        the K x V topic-word table. Training state (z, n_dk) is not kept;
        a loaded model supports inference, not resumed training."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(MODEL_MAGIC + "\n")
            fh.write(json.dumps(self.config.to_json_dict(), sort_keys=True) + "\n")
            fh.write(f"V={self.V}\n")
            fh.write(f"dictionary={self.dictionary.content_hash()}\n")
            fh.write(" ".join(str(c) for c in self.n_k) + "\n")
            for k in range(self.config.K):
                row = (str(self.n_wk[w][k]) for w in range(self.V))
                fh.write(" ".join(row) + "\n")

    @classmethod
    def load(cls, path, dictionary: TokenDictionary) -> "LdaModel":
        with open(path, encoding="utf-8") as fh:
            magic = fh.readline().rstrip("\n")
            if magic != MODEL_MAGIC:
                raise ConfigurationError(f"not a model file (header {magic!r})")
            config = LdaConfig.from_json_dict(json.loads(fh.readline()))
            v_line = fh.readline().strip()
            V = int(v_line.partition("=")[2])
            stored_hash = fh.readline().strip().partition("=")[2]
            actual = dictionary.content_hash()
            if stored_hash != actual:
                raise ConfigurationError(
                    "model was trained against a different dictionary "
                    f"(stored {stored_hash[:12]}, loaded {actual[:12]})")
            if V != dictionary.size:
                raise ConfigurationError("dictionary size mismatch")
            model = cls(config, dictionary, docs=[])
            model.n_k = [int(c) for c in fh.readline().split()]
            for k in range(config.K):
                row = [int(c) for c in fh.readline().split()]
                if len(row) != V:
                    raise ConfigurationError("truncated topic-word table")
                for w in range(V):
                    model.n_wk[w][k] = row[w]
        return model


def train(corpus: BowCorpus, dictionary: TokenDictionary,
          config: LdaConfig) -> LdaModel:
    """Initialize from the config seed and run the configured number of
    sweeps. A pure function of (corpus, dictionary, config)."""
    model = LdaModel.initialize(corpus, dictionary, config)
    model.run_sweeps(config.sweeps)
    return model


# -- inference on unseen text -------------------------------------------------


def _fold_in_ids(ids: list[int], model: LdaModel, fold_sweeps: int,
                 rng: random.Random) -> list[float]:
    """Gibbs fold-in over a token-id list with frozen topic-word counts.
    Returns the smoothed topic mixture.

    The inverse-CDF draw walks topics in descending probability order, not
    index order. That keeps fold-in equivariant under topic relabeling (a
    permuted model visits the same probability sequence), which is what
    makes perplexity exactly permutation-symmetric.
    """
    K = model.config.K
    alpha = model.config.alpha
    n = len(ids)
    weights = {w: model.word_topic_weights(w) for w in set(ids)}
    nd = [0.0] * K
    topics = range(K)
    rand = rng.random

    def draw(w: int) -> int:
        ww = weights[w]
        order = sorted(((nd[kk] + alpha) * ww[kk], kk) for kk in topics)
        total = 0.0
        cum = []
        for value, _ in order:
            total += value
            cum.append(total)
        pick = bisect_right(cum, rand() * total)
        if pick >= K:
            pick = K - 1
        return order[pick][1]

    # initialization is itself a sequential draw from the running
    # conditional, so the whole chain stays label-free
    assign = []
    for w in ids:
        k = draw(w)
        assign.append(k)
        nd[k] += 1
    for _ in range(fold_sweeps):
        for i, w in enumerate(ids):
            nd[assign[i]] -= 1
            k = draw(w)
            assign[i] = k
            nd[k] += 1
    denom = n + K * alpha
    return [(c + alpha) / denom for c in nd]


def infer_theta(tokens: list[str], model: LdaModel,
                fold_sweeps: int | None = None,
                seed: int = 0) -> tuple[list[float], bool]:
    """Topic mixture for an unseen token sequence.

    Returns (theta, unassignable). When no token is in the model
    vocabulary the mixture is uniform and the flag is set.
    """
    if fold_sweeps is None:
        fold_sweeps = model.config.fold_sweeps
    token_to_id = model.dictionary.token_to_id
    ids = [token_to_id[t] for t in tokens if t in token_to_id]
    K = model.config.K
    if not ids:
        return [1.0 / K] * K, True
    rng = random.Random(seed)
    return _fold_in_ids(ids, model, fold_sweeps, rng), False


def dominant_topic(tokens: list[str], model: LdaModel,
                   fold_sweeps: int | None = None,
                   seed: int = 0) -> tuple[int, bool]:
    """Argmax of the inferred mixture; ties break toward the lowest topic
    id, so an unassignable sequence maps to topic 0 with its flag set."""
    theta, flagged = infer_theta(tokens, model, fold_sweeps=fold_sweeps, seed=seed)
    best = 0
    best_p = theta[0]
    for k in range(1, len(theta)):
        if theta[k] > best_p:
            best = k
            best_p = theta[k]
    return best, flagged


def perplexity(model: LdaModel, held_out: BowCorpus,
               fold_sweeps: int | None = None, seed: int = 0) -> float:
    """exp(-log-likelihood / token count) of held-out bags, with each bag's
    mixture estimated by fold-in."""
    if fold_sweeps is None:
        fold_sweeps = model.config.fold_sweeps
    total_tokens = 0
    log_likelihood = 0.0
    rng = random.Random(seed)
    for bag in held_out.docs:
        ids = expand_bag(bag)
        if not ids:
            continue
        theta = _fold_in_ids(ids, model, fold_sweeps, rng)
        for w, count in bag:
            weights = model.word_topic_weights(w)
            p = sum(t * pw for t, pw in zip(theta, weights))
            log_likelihood += count * math.log(p)
            total_tokens += count
    if total_tokens == 0:
        raise EmptyCorpusError("held-out corpus has no in-vocabulary tokens")
    return math.exp(-log_likelihood / total_tokens)


def umass_coherence(model: LdaModel, corpus: BowCorpus,
                    top_m: int = 10) -> list[float]:
    """Per-topic UMass coherence over the given corpus.

    For topic top words w_1..w_M (probability descending),
    C = sum over i>j of log((codoc(w_i, w_j) + 1) / docfreq(w_j)).
    Pairs whose denominator word never occurs in the corpus are skipped.
    """
    if top_m < 1:
        raise ConfigurationError("top_m must be >= 1")
    top_ids: list[list[int]] = []
    needed: set[int] = set()
    for k in range(model.config.K):
        row = model.phi_row(k)
        order = sorted(range(model.V), key=lambda w: (-row[w], w))[:top_m]
        top_ids.append(order)
        needed.update(order)
    doc_sets = [needed.intersection(idx for idx, _ in bag) for bag in corpus.docs]
    doc_freq = {w: 0 for w in needed}
    for present in doc_sets:
        for w in present:
            doc_freq[w] += 1
    scores: list[float] = []
    for order in top_ids:
        score = 0.0
        for i in range(1, len(order)):
            wi = order[i]
            for j in range(i):
                wj = order[j]
                if doc_freq[wj] == 0:
                    logger.debug("coherence: skipping pair with unseen word id %d", wj)
                    continue
                co = sum(1 for present in doc_sets if wi in present and wj in present)
                score += math.log((co + 1) / doc_freq[wj])
        scores.append(score)
    return scores


# -- reporting ---------------------------------------------------------------


@dataclass
class TopicReport:
    """Top words, coherence per topic, and the model perplexity."""

    top_words: list[list[tuple[str, float]]]
    coherence: list[float]
    perplexity: float
    top_m: int = 10

    def to_json(self) -> str:
        payload = {
            "perplexity": self.perplexity,
            "topics": [
                {
                    "topic_id": k,
                    "coherence": self.coherence[k],
                    "words": [{"token": t, "p": p} for t, p in self.top_words[k]],
                }
                for k in range(len(self.top_words))
            ],
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def build_topic_report(model: LdaModel, corpus: BowCorpus,
                       held_out: BowCorpus, top_m: int = 10,
                       seed: int = 0) -> TopicReport:
    return TopicReport(
        top_words=[model.top_words(k, top_m) for k in range(model.config.K)],
        coherence=umass_coherence(model, corpus, top_m=top_m),
        perplexity=perplexity(model, held_out, seed=seed),
        top_m=top_m,
    )
