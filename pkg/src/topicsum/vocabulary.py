"""Token dictionary and bag-of-words corpus construction.

The dictionary maps tokens to dense integer ids in first-occurrence order;
the corpus is the per-document list of (token_id, count) pairs the topic
model consumes.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .cleaning import CleanedDoc
from .errors import ConfigurationError, EmptyVocabularyError

Bag = list[tuple[int, int]]


def _tokens_of(doc) -> list[str]:
    return doc.tokens if isinstance(doc, CleanedDoc) else list(doc)


@dataclass
class TokenDictionary:
    """Bijection between tokens and dense ids 0..V-1, with per-id document
    frequencies and the corpus document count (needed for IDF weighting)."""

    token_to_id: dict[str, int]
    id_to_token: list[str]
    doc_freq: list[int]
    num_docs: int

    @property
    def size(self) -> int:
        return len(self.id_to_token)

    def __len__(self) -> int:
        return len(self.id_to_token)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_id

    def serialize(self) -> str:
        lines = [f"# docs={self.num_docs}"]
        for i, token in enumerate(self.id_to_token):
            lines.append(f"{i}\t{token}\t{self.doc_freq[i]}")
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.serialize())

    @classmethod
    def load(cls, path) -> "TokenDictionary":
        token_to_id: dict[str, int] = {}
        id_to_token: list[str] = []
        doc_freq: list[int] = []
        num_docs = 0
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                if line.startswith("#"):
                    _, _, value = line.partition("docs=")
                    num_docs = int(value)
                    continue
                id_text, token, df_text = line.split("\t")
                idx = int(id_text)
                assert idx == len(id_to_token), "ids must be dense and ordered"
                token_to_id[token] = idx
                id_to_token.append(token)
                doc_freq.append(int(df_text))
        return cls(token_to_id=token_to_id, id_to_token=id_to_token,
                   doc_freq=doc_freq, num_docs=num_docs)

    def content_hash(self) -> str:
        return hashlib.sha256(self.serialize().encode("utf-8")).hexdigest()


def build_dictionary(cleaned, no_below: int = 5,
                     no_above: float = 0.5) -> TokenDictionary:
    """Assign ids in first-occurrence order, then drop tokens whose document
    frequency is below ``no_below`` or above ``no_above * num_docs``.
    Surviving ids are re-densified, keeping first-occurrence order.
    """
    docs = [_tokens_of(d) for d in cleaned]
    if not docs:
        raise ConfigurationError("build_dictionary needs at least one document")
    if not 0.0 <= no_above <= 1.0:
        raise ConfigurationError(f"no_above must be in [0, 1], got {no_above}")
    order: list[str] = []
    doc_freq: dict[str, int] = {}
    for tokens in docs:
        seen: set[str] = set()
        for tok in tokens:
            if tok in seen:
                continue
            seen.add(tok)
            if tok not in doc_freq:
                order.append(tok)
                doc_freq[tok] = 0
            doc_freq[tok] += 1
    num_docs = len(docs)
    limit = no_above * num_docs
    kept = [t for t in order if no_below <= doc_freq[t] <= limit]
    if not kept:
        raise EmptyVocabularyError(
            f"frequency filters no_below={no_below}, no_above={no_above} "
            f"removed all {len(order)} tokens")
    token_to_id = {t: i for i, t in enumerate(kept)}
    return TokenDictionary(token_to_id=token_to_id, id_to_token=kept,
                           doc_freq=[doc_freq[t] for t in kept],
                           num_docs=num_docs)


def to_bow(cleaned, dictionary: TokenDictionary) -> Bag:
    """Count in-vocabulary tokens of one document; out-of-vocabulary tokens
    are dropped. The bag is sorted by token id."""
    counts: dict[int, int] = {}
    token_to_id = dictionary.token_to_id
    for tok in _tokens_of(cleaned):
        idx = token_to_id.get(tok)
        if idx is not None:
            counts[idx] = counts.get(idx, 0) + 1
    return sorted(counts.items())


def expand_bag(bag: Bag) -> list[int]:
    """Flatten a bag back to a token-id list (ids repeated count times,
    in id order)."""
    ids: list[int] = []
    for idx, count in bag:
        ids.extend([idx] * count)
    return ids


@dataclass
class BowCorpus:
    """Bag-of-words corpus: one (token_id, count) bag per document."""

    docs: list[Bag]

    def __len__(self) -> int:
        return len(self.docs)

    def __iter__(self):
        return iter(self.docs)

    def total_tokens(self) -> int:
        return sum(count for bag in self.docs for _, count in bag)

    def validate(self, vocab_size: int) -> None:
        for d, bag in enumerate(self.docs):
            prev = -1
            for idx, count in bag:
                if not 0 <= idx < vocab_size:
                    raise ConfigurationError(f"doc {d}: token id {idx} out of range")
                if count <= 0:
                    raise ConfigurationError(f"doc {d}: non-positive count for id {idx}")
                if idx <= prev:
                    raise ConfigurationError(f"doc {d}: ids not strictly increasing")
                prev = idx

    @classmethod
    def from_cleaned(cls, cleaned, dictionary: TokenDictionary) -> "BowCorpus":
        return cls(docs=[to_bow(d, dictionary) for d in cleaned])

    def save(self, path) -> None:
        """Sparse text format: 'doc_index: id:count id:count ...'."""
        with open(path, "w", encoding="utf-8") as fh:
            for d, bag in enumerate(self.docs):
                cells = " ".join(f"{idx}:{count}" for idx, count in bag)
                fh.write(f"{d}: {cells}\n" if cells else f"{d}:\n")

    @classmethod
    def load(cls, path) -> "BowCorpus":
        docs: list[Bag] = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                head, _, rest = line.partition(":")
                assert int(head) == len(docs), "doc indices must be dense"
                bag: Bag = []
                for cell in rest.split():
                    id_text, _, count_text = cell.partition(":")
                    bag.append((int(id_text), int(count_text)))
                docs.append(bag)
        return cls(docs=docs)
