"""Per-document sentence-to-topic assignment and cluster construction.

Each sentence is cleaned with the training-time pipeline and labeled with
its dominant topic; sentences sharing a topic form an order-preserving
cluster. Sentences with no in-vocabulary token cannot be placed and fall
into topic 0 via the tie rule, flagged so diagnostics can count them.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .cleaning import CleaningContext, SentenceGroup
from .errors import IntegrityError
from .lda import LdaModel, dominant_topic


@dataclass(frozen=True)
class SentenceAssignment:
    doc_id: str
    sentence_index: int
    topic_id: int
    flagged_unassignable: bool


@dataclass(frozen=True)
class TopicClusterSet:
    """Partition of a document's sentences into topic-labeled clusters.

    ``clusters`` maps topic_id to (sentence_index, text) lists in document
    order; ``present_topics`` lists the non-empty topic ids ascending.
    """

    doc_id: str
    clusters: dict[int, list[tuple[int, str]]]
    present_topics: list[int]

    def sentence_count(self) -> int:
        return sum(len(c) for c in self.clusters.values())


def sentence_fold_seed(doc_id: str, sentence_index: int, base_seed: int = 0) -> int:
    """Stable per-sentence fold-in seed. Derived by hashing rather than
    Python's hash() so runs are reproducible across processes."""
    digest = hashlib.sha256(
        f"{base_seed}\x1f{doc_id}\x1f{sentence_index}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def assign_sentences(group: SentenceGroup, model: LdaModel,
                     cleaner: CleaningContext,
                     base_seed: int = 0) -> list[SentenceAssignment]:
    """Clean each sentence with the training-time pipeline and take the
    dominant topic of its fold-in mixture."""
    assignments = []
    for index, text in group.sentences:
        tokens = cleaner.clean(text).tokens
        seed = sentence_fold_seed(group.doc_id, index, base_seed)
        topic, flagged = dominant_topic(tokens, model, seed=seed)
        assignments.append(SentenceAssignment(
            doc_id=group.doc_id, sentence_index=index,
            topic_id=topic, flagged_unassignable=flagged))
    return assignments


def build_clusters(assignments: list[SentenceAssignment],
                   group: SentenceGroup) -> TopicClusterSet:
    """Group sentences by topic id, preserving document order. The
    assignments must cover the group's sentence indices exactly once."""
    if not assignments:
        raise IntegrityError("no assignments for document "
                             f"{group.doc_id!r} with {len(group)} sentences")
    expected = [index for index, _ in group.sentences]
    got = sorted(a.sentence_index for a in assignments)
    if got != expected:
        raise IntegrityError(
            f"assignments do not cover sentences exactly once for "
            f"{group.doc_id!r}: got {got}, expected {expected}")
    text_of = dict(group.sentences)
    clusters: dict[int, list[tuple[int, str]]] = {}
    for a in sorted(assignments, key=lambda a: a.sentence_index):
        clusters.setdefault(a.topic_id, []).append(
            (a.sentence_index, text_of[a.sentence_index]))
    return TopicClusterSet(doc_id=group.doc_id, clusters=clusters,
                           present_topics=sorted(clusters))


def clusters_to_json(cluster_set: TopicClusterSet, num_topics: int) -> str:
    """JSON dump mapping every topic id (including empty ones) to its
    sentence list."""
    payload = {str(k): [text for _, text in cluster_set.clusters.get(k, [])]
               for k in range(num_topics)}
    return json.dumps(payload, indent=1, sort_keys=False)
