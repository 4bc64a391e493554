"""Shared fixtures: the sample how-to article with its expected cleaned
tokens, and a synthetic corpus drawn from known topics by a brute-force
generative sampler (the recovery oracle for the Gibbs trainer)."""

from __future__ import annotations

import random
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path

import pytest

from topicsum.cleaning import CleaningContext, PhraseModel, load_stopwords
from topicsum.lda import LdaConfig, train
from topicsum.vocabulary import BowCorpus, TokenDictionary, build_dictionary

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def stopwords():
    return load_stopwords()


@pytest.fixture(scope="session")
def sample_article() -> str:
    return (DATA_DIR / "comb_long_hair_article.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def sample_expected_tokens() -> list[str]:
    return (DATA_DIR / "comb_long_hair_cleaned.txt").read_text(encoding="utf-8").split()


@pytest.fixture(scope="session")
def sample_phrase_model() -> PhraseModel:
    # The corpus-scale statistics behind "wide toothed comb" cannot be
    # re-learned from one article; the pairs the full corpus would retain
    # are constructed directly.
    return PhraseModel(
        min_count=5, threshold=10.0,
        pair_scores={("wide", "toothed"): 20.0, ("wide_toothed", "comb"): 20.0},
        pair_counts={("wide", "toothed"): 10, ("wide_toothed", "comb"): 10})


@pytest.fixture(scope="session")
def sample_cleaner(stopwords, sample_phrase_model) -> CleaningContext:
    return CleaningContext(stopwords=stopwords, phrases=sample_phrase_model)


# -- synthetic topic-recovery corpus -------------------------------------------


@dataclass
class SyntheticTopics:
    """A corpus drawn from known disjoint-vocabulary topics."""

    n_topics: int
    vocab: list[str]
    phi_true: list[list[float]]         # n_topics x V
    theta_true: list[list[float]]       # n_docs x n_topics
    docs: list[list[str]]               # token lists
    dictionary: TokenDictionary
    corpus: BowCorpus
    seed: int

    def draw_topic_sentence(self, topic: int, length: int,
                            rng: random.Random) -> list[str]:
        cum = []
        total = 0.0
        for p in self.phi_true[topic]:
            total += p
            cum.append(total)
        out = []
        for _ in range(length):
            w = bisect_right(cum, rng.random() * total)
            out.append(self.vocab[min(w, len(self.vocab) - 1)])
        return out


def _dirichlet(rng: random.Random, dim: int, concentration: float) -> list[float]:
    draws = [rng.gammavariate(concentration, 1.0) for _ in range(dim)]
    total = sum(draws)
    return [d / total for d in draws]


def make_synthetic_topics(n_topics: int = 3, words_per_topic: int = 10,
                          n_docs: int = 200, doc_len: int = 50,
                          seed: int = 7) -> SyntheticTopics:
    """Brute-force generative sampler: theta_d ~ Dirichlet, z ~ theta_d,
    w ~ phi_z, with each topic owning a disjoint word block."""
    rng = random.Random(seed)
    vocab = [f"t{t}w{i}" for t in range(n_topics) for i in range(words_per_topic)]
    V = len(vocab)
    phi_true = []
    for t in range(n_topics):
        block = _dirichlet(rng, words_per_topic, 2.0)
        row = [0.0] * V
        for i, p in enumerate(block):
            row[t * words_per_topic + i] = p
        phi_true.append(row)
    cums = []
    for row in phi_true:
        cum, total = [], 0.0
        for p in row:
            total += p
            cum.append(total)
        cums.append((cum, total))
    theta_true = []
    docs = []
    for _ in range(n_docs):
        theta = _dirichlet(rng, n_topics, 0.8)
        theta_true.append(theta)
        theta_cum, acc = [], 0.0
        for p in theta:
            acc += p
            theta_cum.append(acc)
        tokens = []
        for _ in range(doc_len):
            t = min(bisect_right(theta_cum, rng.random() * acc), n_topics - 1)
            cum, total = cums[t]
            w = min(bisect_right(cum, rng.random() * total), V - 1)
            tokens.append(vocab[w])
        docs.append(tokens)
    dictionary = build_dictionary(docs, no_below=0, no_above=1.0)
    corpus = BowCorpus.from_cleaned(docs, dictionary)
    return SyntheticTopics(n_topics=n_topics, vocab=vocab, phi_true=phi_true,
                           theta_true=theta_true, docs=docs,
                           dictionary=dictionary, corpus=corpus, seed=seed)


def greedy_topic_match(synthetic: SyntheticTopics, model) -> tuple[dict[int, int], float]:
    """Greedily pair each true topic with a recovered one by L1 distance
    over the synthetic vocabulary. Returns (true -> model topic, mean L1)."""
    ids = [synthetic.dictionary.token_to_id.get(tok) for tok in synthetic.vocab]
    model_rows = [model.phi_row(k) for k in range(model.config.K)]
    distances: dict[tuple[int, int], float] = {}
    for t, true_row in enumerate(synthetic.phi_true):
        for k, phi_k in enumerate(model_rows):
            dist = 0.0
            for w, idx in enumerate(ids):
                estimate = phi_k[idx] if idx is not None else 0.0
                dist += abs(true_row[w] - estimate)
            distances[(t, k)] = dist
    mapping: dict[int, int] = {}
    used_true: set[int] = set()
    used_model: set[int] = set()
    total = 0.0
    for _ in range(synthetic.n_topics):
        (t, k), dist = min(
            ((pair, d) for pair, d in distances.items()
             if pair[0] not in used_true and pair[1] not in used_model),
            key=lambda item: item[1])
        mapping[t] = k
        used_true.add(t)
        used_model.add(k)
        total += dist
    return mapping, total / synthetic.n_topics


def draw_corpus(synthetic: SyntheticTopics, n_docs: int, doc_len: int,
                seed: int) -> BowCorpus:
    """Fresh documents from the same generative process (new thetas, the
    trained dictionary); the held-out side of the perplexity checks."""
    rng = random.Random(seed)
    docs = []
    for _ in range(n_docs):
        theta = _dirichlet(rng, synthetic.n_topics, 0.8)
        cum, acc = [], 0.0
        for p in theta:
            acc += p
            cum.append(acc)
        tokens = []
        for _ in range(doc_len):
            t = min(bisect_right(cum, rng.random() * acc), synthetic.n_topics - 1)
            tokens.extend(synthetic.draw_topic_sentence(t, 1, rng))
        docs.append(tokens)
    return BowCorpus.from_cleaned(docs, synthetic.dictionary)


@pytest.fixture(scope="session")
def synthetic() -> SyntheticTopics:
    return make_synthetic_topics(seed=7)


@pytest.fixture(scope="session")
def synthetic_model(synthetic):
    config = LdaConfig(K=3, alpha=0.1, beta=0.01, sweeps=500, burn_in=0, seed=11)
    return train(synthetic.corpus, synthetic.dictionary, config)
