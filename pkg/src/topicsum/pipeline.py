"""End-to-end batch pipeline: ingest, clean, train, summarize, evaluate,
report, plus the lead-3 and random baselines.

Stages persist their artifacts under the work directory and are skipped
when their outputs already exist, so deleting an intermediate file and
re-running resumes from the last completed stage. Every random choice is
seeded from the global seed and document ids, which makes the pipeline a
pure function of (corpus file, config): reruns produce byte-identical
summaries and reports for any worker count. Stage wall-clock timings go to
their own file (timings.json) to keep the run report reproducible.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import random
import time
from concurrent.futures import ThreadPoolExecutor
from configparser import ConfigParser
from dataclasses import dataclass, field, replace
from pathlib import Path

from .cleaning import (CleaningContext, PhraseModel, SentenceGroup,
                       learn_phrases, load_stopwords, segment_sentences,
                       strip_and_tokenize)
from .clustering import assign_sentences, build_clusters, clusters_to_json
from .dataset import ArticlePair, CorpusManifest, ingest_csv, read_split, write_split
from .errors import ConfigurationError, PipelineError, TopicSumError
from .lda import LdaConfig, LdaModel, build_topic_report, train
from .rouge import (DEFAULT_TOKENIZATION, METRIC_CHOICES, RougeScore,
                    aggregate, score_pair)
from .textrank import (ExtractiveSummary, SentenceProvenance, SummaryContext,
                       TextRankConfig, assemble_summary, load_embedding_table)
from .vocabulary import BowCorpus, TokenDictionary, build_dictionary

logger = logging.getLogger(__name__)

HOLDOUT_BUCKETS = 10  # one bucket in ten is held out for perplexity

STAGES = ("ingest", "clean", "train", "summarize", "evaluate", "report")

# measured rows carry the evaluation tokenizer settings so scores are
# interpretable next to published numbers whose preprocessing is unknown
SCORER_SETTINGS = (
    ("lowercase", DEFAULT_TOKENIZATION.lowercase),
    ("stemming", DEFAULT_TOKENIZATION.stem),
    ("token_pattern", DEFAULT_TOKENIZATION.pattern),
)


@dataclass(frozen=True)
class PipelineConfig:
    corpus_csv: str
    work_dir: str
    embeddings_path: str | None = None
    limit: int | None = None
    no_below: int = 5
    no_above: float = 0.5
    phrase_min_count: int = 5
    phrase_threshold: float = 10.0
    lda: LdaConfig = field(default_factory=LdaConfig)
    textrank: TextRankConfig = field(default_factory=TextRankConfig)
    metrics: tuple[str, ...] = ("r1", "r2", "rl")
    seed: int = 13
    workers: int = 1
    random_k: int = 3

    def __post_init__(self):
        if self.workers < 1:
            raise ConfigurationError(f"workers must be >= 1, got {self.workers}")
        if self.random_k < 1:
            raise ConfigurationError(f"random_k must be >= 1, got {self.random_k}")
        for name in self.metrics:
            if name not in METRIC_CHOICES:
                raise ConfigurationError(
                    f"unknown metric {name!r}; choices are {', '.join(METRIC_CHOICES)}")

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        """Flat key=value config with [section] headers (see README)."""
        parser = ConfigParser()
        read = parser.read(path)
        if not read:
            raise ConfigurationError(f"config file not found: {path}")

        def get(section, key, cast, fallback):
            if not parser.has_option(section, key):
                return fallback
            raw = parser.get(section, key).strip()
            if raw == "":
                return fallback
            try:
                return cast(raw)
            except ValueError as exc:
                raise ConfigurationError(
                    f"[{section}] {key} = {raw!r}: {exc}") from exc

        corpus = get("paths", "corpus", str, None)
        work_dir = get("paths", "work_dir", str, None)
        if corpus is None or work_dir is None:
            raise ConfigurationError(
                "[paths] corpus and work_dir are required in the config file")
        seed = get("run", "seed", int, 13)
        sweeps = get("lda", "sweeps", int, 1000)
        lda = LdaConfig(
            K=get("lda", "k", int, 20),
            alpha=get("lda", "alpha", float, None),
            beta=get("lda", "beta", float, 0.01),
            sweeps=sweeps,
            burn_in=get("lda", "burn_in", int, min(100, sweeps - 1)),
            fold_sweeps=get("lda", "fold_sweeps", int, 20),
            seed=get("lda", "seed", int, seed),
        )
        textrank = TextRankConfig(
            damping=get("textrank", "damping", float, 0.85),
            tol=get("textrank", "tol", float, 1e-6),
            max_iter=get("textrank", "max_iter", int, 100),
            top_n=get("textrank", "top_n", int, 1),
            min_cluster_sentences=get("textrank", "min_cluster_sentences", int, 3),
            similarity_mode=get("textrank", "similarity_mode", str, "tfidf"),
        )
        metrics_raw = get("rouge", "metrics", str, "r1,r2,rl")
        metrics = tuple(m.strip() for m in metrics_raw.split(",") if m.strip())
        return cls(
            corpus_csv=corpus,
            work_dir=work_dir,
            embeddings_path=get("paths", "embeddings", str, None),
            limit=get("run", "limit", int, None),
            no_below=get("cleaning", "no_below", int, 5),
            no_above=get("cleaning", "no_above", float, 0.5),
            phrase_min_count=get("cleaning", "phrase_min_count", int, 5),
            phrase_threshold=get("cleaning", "phrase_threshold", float, 10.0),
            lda=lda,
            textrank=textrank,
            metrics=metrics,
            seed=seed,
            workers=get("run", "workers", int, 1),
            random_k=get("run", "random_k", int, 3),
        )

    def with_overrides(self, **kwargs) -> "PipelineConfig":
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        if "seed" in kwargs and "lda" not in kwargs:
            kwargs["lda"] = replace(self.lda, seed=kwargs["seed"])
        return replace(self, **kwargs)


@dataclass
class RunReport:
    """Deterministic run summary; timings are serialized separately."""

    documents: int = 0
    skipped_rows: int = 0
    vocabulary_size: int = 0
    perplexity: float | None = None
    perplexity_on_heldout: bool = True
    mean_coherence: float | None = None
    rouge: dict[str, RougeScore] = field(default_factory=dict)
    baselines: dict[str, dict[str, RougeScore]] = field(default_factory=dict)
    summaries_emitted: int = 0
    documents_failed: int = 0
    timings: dict[str, float] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        def scores(mapping):
            return {name: {"precision": s.precision, "recall": s.recall,
                           "f1": s.f1} for name, s in mapping.items()}
        return {
            "documents": self.documents,
            "skipped_rows": self.skipped_rows,
            "vocabulary_size": self.vocabulary_size,
            "perplexity": self.perplexity,
            "perplexity_on_heldout": self.perplexity_on_heldout,
            "mean_coherence": self.mean_coherence,
            "rouge": scores(self.rouge),
            "baselines": {label: scores(m) for label, m in self.baselines.items()},
            "summaries_emitted": self.summaries_emitted,
            "documents_failed": self.documents_failed,
            "scorer": dict(SCORER_SETTINGS),
        }


class Workspace:
    """Artifact paths under one work directory."""

    def __init__(self, work_dir):
        self.root = Path(work_dir)
        self.manifest = self.root / "manifest.json"
        self.articles_dir = self.root / "articles"
        self.summaries_dir = self.root / "summaries"
        self.cleaned = self.root / "cleaned.txt"
        self.phrases = self.root / "phrases.tsv"
        self.dictionary = self.root / "dictionary.tsv"
        self.corpus = self.root / "corpus.txt"
        self.model = self.root / "model.lda"
        self.topic_report = self.root / "topic_report.json"
        self.generated_dir = self.root / "generated"
        self.clusters_dir = self.root / "clusters"
        self.provenance = self.root / "provenance.json"
        self.rouge_per_doc = self.root / "rouge_per_doc.csv"
        self.rouge_corpus = self.root / "rouge_corpus.json"
        self.baselines = self.root / "baselines.json"
        self.run_report = self.root / "run_report.json"
        self.timings = self.root / "timings.json"
        self.report_csv = self.root / "report.csv"
        self.report_txt = self.root / "report.txt"


def run_parallel(fn, items, workers: int):
    """Order-preserving map over documents with a bounded worker pool."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def holdout_bucket(doc_id: str) -> int:
    return hashlib.sha256(doc_id.encode("utf-8")).digest()[0] % HOLDOUT_BUCKETS


def is_heldout(doc_id: str) -> bool:
    return holdout_bucket(doc_id) == 0


def derived_seed(*parts) -> int:
    digest = hashlib.sha256("\x1f".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "big")


# -- baselines ----------------------------------------------------------------


def lead3_baseline(group: SentenceGroup) -> ExtractiveSummary:
    """The first min(3, n) sentences, a strong baseline on news-style text."""
    chosen = group.sentences[:3]
    return ExtractiveSummary(
        doc_id=group.doc_id,
        sentences=list(chosen),
        provenance=[SentenceProvenance(sentence_index=i, topic_id=-1, rank=r)
                    for r, (i, _) in enumerate(chosen)])


def random_baseline(group: SentenceGroup, k: int,
                    seed: int = 0) -> ExtractiveSummary:
    """k distinct sentences sampled uniformly, kept in document order."""
    if k < 1:
        raise ConfigurationError(f"k must be >= 1, got {k}")
    rng = random.Random(seed)
    n = len(group.sentences)
    indices = sorted(rng.sample(range(n), min(k, n)))
    chosen = [group.sentences[i] for i in indices]
    return ExtractiveSummary(
        doc_id=group.doc_id,
        sentences=chosen,
        provenance=[SentenceProvenance(sentence_index=i, topic_id=-1, rank=r)
                    for r, (i, _) in enumerate(chosen)])


# -- stages ---------------------------------------------------------------------


def stage_ingest(config: PipelineConfig, workspace: Workspace) -> CorpusManifest:
    if workspace.manifest.exists():
        data = json.loads(workspace.manifest.read_text())
        manifest = CorpusManifest(**data)
        manifest.finished = True
        on_disk = (len(list(workspace.articles_dir.glob("*.txt")))
                   if workspace.articles_dir.is_dir() else 0)
        if on_disk == manifest.record_count:
            logger.info("ingest: reusing %d documents", manifest.record_count)
            return manifest
        logger.info("ingest: article tree incomplete (%d of %d), rebuilding",
                    on_disk, manifest.record_count)
    pairs, manifest = ingest_csv(config.corpus_csv, limit=config.limit)
    write_split(pairs, workspace.root)
    workspace.manifest.write_text(manifest.to_json() + "\n")
    logger.info("ingest: %d documents, %d skipped",
                manifest.record_count, manifest.skipped_count)
    return manifest


def _load_cleaned(path) -> tuple[list[str], dict[str, list[str]]]:
    ids: list[str] = []
    tokens: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            doc_id, _, rest = line.rstrip("\n").partition("\t")
            ids.append(doc_id)
            tokens[doc_id] = rest.split() if rest else []
    return ids, tokens


def stage_clean(config: PipelineConfig, workspace: Workspace,
                ) -> tuple[list[str], dict[str, list[str]], CleaningContext]:
    stopwords = load_stopwords()
    if workspace.cleaned.exists() and workspace.phrases.exists():
        ids, tokens = _load_cleaned(workspace.cleaned)
        phrases = PhraseModel.load(workspace.phrases)
        logger.info("clean: reusing %d cleaned documents", len(ids))
        return ids, tokens, CleaningContext(stopwords=stopwords, phrases=phrases)
    pairs = read_split(workspace.root)
    if not pairs:
        raise PipelineError("clean", "no ingested articles found; run ingest first")
    stripped = run_parallel(
        lambda pair: strip_and_tokenize(pair.article, stopwords),
        pairs, config.workers)
    phrases = learn_phrases(stripped, min_count=config.phrase_min_count,
                            threshold=config.phrase_threshold)
    context = CleaningContext(stopwords=stopwords, phrases=phrases)
    cleaned = run_parallel(
        lambda pair: context.clean(pair.article, doc_id=pair.id),
        pairs, config.workers)
    with open(workspace.cleaned, "w", encoding="utf-8") as fh:
        for doc in cleaned:
            fh.write(f"{doc.doc_id}\t{' '.join(doc.tokens)}\n")
    phrases.save(workspace.phrases)
    ids = [doc.doc_id for doc in cleaned]
    tokens = {doc.doc_id: doc.tokens for doc in cleaned}
    logger.info("clean: %d documents, %d phrase pairs",
                len(ids), len(phrases.pair_scores))
    return ids, tokens, context


def stage_train(config: PipelineConfig, workspace: Workspace,
                ids: list[str], tokens: dict[str, list[str]],
                ) -> tuple[LdaModel, TokenDictionary]:
    if all(p.exists() for p in (workspace.model, workspace.dictionary,
                                workspace.corpus, workspace.topic_report)):
        dictionary = TokenDictionary.load(workspace.dictionary)
        model = LdaModel.load(workspace.model, dictionary)
        logger.info("train: reusing model (K=%d, V=%d)", model.config.K, model.V)
        return model, dictionary
    train_ids = [i for i in ids if not is_heldout(i)]
    heldout_ids = [i for i in ids if is_heldout(i)]
    if not train_ids:
        train_ids, heldout_ids = ids, []
    dictionary = build_dictionary([tokens[i] for i in train_ids],
                                  no_below=config.no_below,
                                  no_above=config.no_above)
    corpus = BowCorpus.from_cleaned([tokens[i] for i in train_ids], dictionary)
    model = train(corpus, dictionary, config.lda)
    dictionary.save(workspace.dictionary)
    all_corpus = BowCorpus.from_cleaned([tokens[i] for i in ids], dictionary)
    all_corpus.save(workspace.corpus)
    model.save(workspace.model)
    heldout = BowCorpus.from_cleaned([tokens[i] for i in heldout_ids], dictionary)
    heldout_nonempty = BowCorpus(docs=[b for b in heldout.docs if b])
    used_heldout = bool(heldout_nonempty.docs)
    report = build_topic_report(
        model, corpus,
        heldout_nonempty if used_heldout else corpus,
        seed=derived_seed(config.seed, "perplexity"))
    payload = json.loads(report.to_json())
    payload["perplexity_on_heldout"] = used_heldout
    workspace.topic_report.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n")
    logger.info("train: V=%d, perplexity=%.2f", dictionary.size, report.perplexity)
    return model, dictionary


def _summarize_one(pair: ArticlePair, model: LdaModel, context: SummaryContext,
                   config: PipelineConfig) -> tuple[ExtractiveSummary, str]:
    group = segment_sentences(pair.article, doc_id=pair.id)
    assignments = assign_sentences(group, model, context.cleaner,
                                   base_seed=config.seed)
    clusters = build_clusters(assignments, group)
    dump = clusters_to_json(clusters, num_topics=model.config.K)
    return assemble_summary(clusters, config.textrank, context), dump


def stage_summarize(config: PipelineConfig, workspace: Workspace,
                    model: LdaModel, dictionary: TokenDictionary,
                    cleaner: CleaningContext) -> tuple[int, int]:
    if (workspace.generated_dir.is_dir() and workspace.clusters_dir.is_dir()
            and workspace.provenance.exists()):
        emitted = len(list(workspace.generated_dir.glob("*.txt")))
        logger.info("summarize: reusing %d summaries", emitted)
        failures = json.loads(workspace.provenance.read_text()).get("failed", [])
        return emitted, len(failures)
    pairs = read_split(workspace.root)
    embeddings = None
    if config.textrank.similarity_mode == "embedding":
        if not config.embeddings_path:
            raise PipelineError("summarize",
                                "embedding mode needs an embeddings path")
        embeddings = load_embedding_table(config.embeddings_path)
    context = SummaryContext(cleaner=cleaner, dictionary=dictionary,
                             embeddings=embeddings)

    def work(pair: ArticlePair):
        try:
            return _summarize_one(pair, model, context, config)
        except TopicSumError as exc:
            logger.warning("summarize: %s failed: %s", pair.id, exc)
            return pair.id

    results = run_parallel(work, pairs, config.workers)
    workspace.generated_dir.mkdir(parents=True, exist_ok=True)
    workspace.clusters_dir.mkdir(parents=True, exist_ok=True)
    provenance: dict = {"documents": {}, "failed": []}
    emitted = 0
    for result in results:
        if isinstance(result, str):
            provenance["failed"].append(result)
            continue
        summary, cluster_dump = result
        out = workspace.generated_dir / f"{summary.doc_id}.txt"
        out.write_text(summary.text + ("\n" if summary.sentences else ""),
                       encoding="utf-8")
        (workspace.clusters_dir / f"{summary.doc_id}.json").write_text(
            cluster_dump + "\n", encoding="utf-8")
        provenance["documents"][summary.doc_id] = [
            {"sentence_index": p.sentence_index, "topic_id": p.topic_id,
             "rank": p.rank} for p in summary.provenance]
        emitted += 1
    workspace.provenance.write_text(
        json.dumps(provenance, indent=1, sort_keys=True) + "\n")
    logger.info("summarize: emitted %d summaries, %d failures",
                emitted, len(provenance["failed"]))
    return emitted, len(provenance["failed"])


def _score_documents(pairs: list[ArticlePair], texts: dict[str, str],
                     config: PipelineConfig) -> dict[str, dict[str, RougeScore]]:
    def work(pair: ArticlePair):
        candidate = texts.get(pair.id)
        if candidate is None:
            return pair.id, None
        return pair.id, score_pair(candidate, pair.reference_summary,
                                   metrics=config.metrics)

    results = run_parallel(work, pairs, config.workers)
    return {doc_id: scores for doc_id, scores in results if scores is not None}


def _aggregate_by_metric(per_doc: dict[str, dict[str, RougeScore]],
                         metrics) -> dict[str, RougeScore]:
    return {m: aggregate([scores[m] for scores in per_doc.values()])
            for m in metrics} if per_doc else {}


def stage_evaluate(config: PipelineConfig, workspace: Workspace,
                   ) -> tuple[dict[str, RougeScore], dict[str, dict[str, RougeScore]]]:
    if all(p.exists() for p in (workspace.rouge_corpus, workspace.baselines,
                                workspace.rouge_per_doc)):
        corpus_scores = _load_score_map(workspace.rouge_corpus)
        baselines = {label: _scores_from_dict(mapping)
                     for label, mapping in
                     json.loads(workspace.baselines.read_text()).items()}
        logger.info("evaluate: reusing corpus scores")
        return corpus_scores, baselines
    pairs = read_split(workspace.root)
    generated: dict[str, str] = {}
    for path in sorted(workspace.generated_dir.glob("*.txt")):
        generated[path.stem] = path.read_text(encoding="utf-8")
    per_doc = _score_documents(pairs, generated, config)
    if not per_doc:
        raise PipelineError("evaluate", "no generated summaries to score")
    with open(workspace.rouge_per_doc, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["doc_id", "metric", "precision", "recall", "f1"])
        for doc_id in sorted(per_doc):
            for metric in config.metrics:
                s = per_doc[doc_id][metric]
                writer.writerow([doc_id, metric, repr(s.precision),
                                 repr(s.recall), repr(s.f1)])
    corpus_scores = _aggregate_by_metric(per_doc, config.metrics)
    _save_score_map(workspace.rouge_corpus, corpus_scores)

    baselines: dict[str, dict[str, RougeScore]] = {}
    groups = {p.id: segment_sentences(p.article, doc_id=p.id) for p in pairs}
    lead_texts = {i: lead3_baseline(groups[i]).text for i in groups}
    random_texts = {
        i: random_baseline(groups[i], config.random_k,
                           seed=derived_seed(config.seed, i, "random")).text
        for i in groups}
    baselines["lead3"] = _aggregate_by_metric(
        _score_documents(pairs, lead_texts, config), config.metrics)
    baselines[f"random{config.random_k}"] = _aggregate_by_metric(
        _score_documents(pairs, random_texts, config), config.metrics)
    workspace.baselines.write_text(json.dumps(
        {label: {m: {"precision": s.precision, "recall": s.recall, "f1": s.f1}
                 for m, s in mapping.items()}
         for label, mapping in baselines.items()},
        indent=1, sort_keys=True) + "\n")
    logger.info("evaluate: scored %d documents", len(per_doc))
    return corpus_scores, baselines


def _save_score_map(path, scores: dict[str, RougeScore]) -> None:
    payload = {m: {"precision": s.precision, "recall": s.recall, "f1": s.f1}
               for m, s in scores.items()}
    Path(path).write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")


def _scores_from_dict(mapping: dict) -> dict[str, RougeScore]:
    return {m: RougeScore(precision=v["precision"], recall=v["recall"],
                          f1=v["f1"]) for m, v in mapping.items()}


def _load_score_map(path) -> dict[str, RougeScore]:
    return _scores_from_dict(json.loads(Path(path).read_text()))


# -- published reference results ------------------------------------------------

# WikiHow results published for well-known summarizers, kept for report
# context. These numbers are quoted, not reproduced by this package; the
# metric basis (recall vs F1) is not labeled in the original sources.
PUBLISHED_WIKIHOW_ROWS: tuple[tuple[str, float, float, float], ...] = (
    ("seq-to-seq with attention (published)", 22.04, 6.27, 20.87),
    ("lead-3 (published)", 26.00, 7.24, 24.25),
    ("pointer-generator (published)", 26.02, 7.92, 24.59),
    ("topic augmented generator (published)", 26.18, 8.18, 25.25),
    ("pointer-generator + coverage (published)", 27.08, 8.49, 26.25),
    ("topic-cluster extractive (published)", 27.08, 6.89, 25.43),
    ("textrank (published)", 27.53, 7.40, 20.00),
    ("topic augmented generator + coverage (published)", 28.36, 9.05, 27.48),
)


@dataclass(frozen=True)
class ReportRow:
    label: str
    values: dict[str, float]  # metric -> percent
    note: str


@dataclass(frozen=True)
class ReportTable:
    columns: tuple[str, ...]
    rows: tuple[ReportRow, ...]

    def to_csv_text(self) -> str:
        header = ["model"] + [f"{c} F1 (%)" for c in self.columns] + ["note"]
        lines = [",".join(header)]
        for row in self.rows:
            cells = [row.label]
            cells += [f"{row.values.get(c, float('nan')):.2f}" for c in self.columns]
            cells.append(row.note)
            lines.append(",".join(f'"{c}"' if "," in c else c for c in cells))
        return "\n".join(lines) + "\n"

    def to_aligned_text(self) -> str:
        header = ["model"] + [f"{c}-F1%" for c in self.columns] + ["note"]
        body = []
        for row in self.rows:
            cells = [row.label]
            cells += [f"{row.values.get(c, float('nan')):.2f}" for c in self.columns]
            cells.append(row.note)
            body.append(cells)
        widths = [max(len(header[i]), *(len(r[i]) for r in body)) if body
                  else len(header[i]) for i in range(len(header))]
        def fmt(cells):
            return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
        rule = "  ".join("-" * w for w in widths)
        return "\n".join([fmt(header), rule] + [fmt(r) for r in body]) + "\n"


def report_table(measured: list[tuple[str, dict[str, RougeScore]]],
                 extra_metrics: tuple[str, ...] = (),
                 include_published: bool = True) -> ReportTable:
    """Comparison table over ROUGE-1/2/L F1 (plus extras), rows sorted by
    ROUGE-1 ascending. Published rows are context only and marked as such."""
    columns = ("r1", "r2", "rl") + tuple(m for m in extra_metrics
                                         if m not in ("r1", "r2", "rl"))
    rows: list[ReportRow] = []
    for label, scores in measured:
        values = {m: scores[m].f1 * 100.0 for m in columns if m in scores}
        rows.append(ReportRow(label=label, values=values, note="measured"))
    if include_published:
        for label, r1, r2, rl in PUBLISHED_WIKIHOW_ROWS:
            rows.append(ReportRow(label=label,
                                  values={"r1": r1, "r2": r2, "rl": rl},
                                  note="published, not reproduced"))
    rows.sort(key=lambda row: (row.values.get("r1", 0.0), row.label))
    return ReportTable(columns=columns, rows=tuple(rows))


def stage_report(config: PipelineConfig, workspace: Workspace,
                 corpus_scores: dict[str, RougeScore],
                 baselines: dict[str, dict[str, RougeScore]]) -> ReportTable:
    measured = [("topic-cluster extractive (this run)", corpus_scores)]
    for label, scores in sorted(baselines.items()):
        measured.append((f"{label} (this run)", scores))
    extra = tuple(m for m in config.metrics if m not in ("r1", "r2", "rl"))
    table = report_table(measured, extra_metrics=extra)
    scorer_note = "scorer for measured rows: " + ", ".join(
        f"{key}={value}" for key, value in SCORER_SETTINGS)
    workspace.report_csv.write_text(table.to_csv_text()
                                    + f"# {scorer_note}\n")
    workspace.report_txt.write_text(table.to_aligned_text()
                                    + f"\n{scorer_note}\n")
    return table


# -- the full pipeline ---------------------------------------------------------


def run_pipeline(config: PipelineConfig) -> RunReport:
    """Run every stage in order and return the run report. Fatal errors
    carry the failing stage's name; per-document failures are counted, not
    fatal."""
    workspace = Workspace(config.work_dir)
    workspace.root.mkdir(parents=True, exist_ok=True)
    report = RunReport()
    timings: dict[str, float] = {}

    def timed(stage, fn):
        start = time.perf_counter()
        try:
            result = fn()
        except (TopicSumError, OSError) as exc:
            if isinstance(exc, PipelineError):
                raise
            raise PipelineError(stage, str(exc)) from exc
        timings[stage] = time.perf_counter() - start
        return result

    manifest = timed("ingest", lambda: stage_ingest(config, workspace))
    report.documents = manifest.record_count
    report.skipped_rows = manifest.skipped_count

    ids, tokens, cleaner = timed("clean", lambda: stage_clean(config, workspace))
    model, dictionary = timed(
        "train", lambda: stage_train(config, workspace, ids, tokens))
    report.vocabulary_size = dictionary.size

    topic_payload = json.loads(workspace.topic_report.read_text())
    report.perplexity = topic_payload["perplexity"]
    report.perplexity_on_heldout = topic_payload.get("perplexity_on_heldout", True)
    coherences = [t["coherence"] for t in topic_payload["topics"]]
    report.mean_coherence = sum(coherences) / len(coherences)

    emitted, failed = timed(
        "summarize",
        lambda: stage_summarize(config, workspace, model, dictionary, cleaner))
    report.summaries_emitted = emitted
    report.documents_failed = failed

    corpus_scores, baselines = timed(
        "evaluate", lambda: stage_evaluate(config, workspace))
    report.rouge = corpus_scores
    report.baselines = baselines

    timed("report", lambda: stage_report(config, workspace, corpus_scores,
                                         baselines))

    report.timings = timings
    workspace.run_report.write_text(
        json.dumps(report.to_json_dict(), indent=1, sort_keys=True) + "\n")
    workspace.timings.write_text(
        json.dumps(timings, indent=1, sort_keys=True) + "\n")
    return report
