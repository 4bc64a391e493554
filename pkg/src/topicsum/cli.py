"""Batch command-line interface.

Subcommands mirror the pipeline stages (ingest, clean, train, summarize,
evaluate, report) plus `pipeline`, which runs everything. Settings come
from an INI-style config file; every flag overrides its config key. Exit
codes: 0 success, 1 fatal stage error, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace

from .errors import ConfigurationError, TopicSumError
from .lda import LdaConfig
from .pipeline import (PipelineConfig, Workspace, run_pipeline, stage_clean,
                       stage_evaluate, stage_ingest, stage_report,
                       stage_summarize, stage_train)
from .rouge import METRIC_CHOICES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topicsum",
        description="Topic-cluster extractive summarization pipeline")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
            ("ingest", "read the corpus CSV and write article/summary trees"),
            ("clean", "tokenize, learn phrases, and lemmatize all articles"),
            ("train", "build dictionary and corpus, train the topic model"),
            ("summarize", "cluster sentences by topic and extract summaries"),
            ("evaluate", "score generated summaries and baselines"),
            ("report", "render the comparison table"),
            ("pipeline", "run every stage in order")]:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", help="INI config file (see README)")
        cmd.add_argument("--corpus", help="corpus CSV path")
        cmd.add_argument("--work-dir", help="artifact directory")
        cmd.add_argument("--seed", type=int, help="global random seed")
        cmd.add_argument("--workers", type=int, help="worker pool size")
        cmd.add_argument("--limit", type=int, help="max documents to ingest")
        cmd.add_argument("--metrics",
                         help=f"comma list from: {','.join(METRIC_CHOICES)}")
        cmd.add_argument("--k", type=int, help="number of topics")
        cmd.add_argument("--sweeps", type=int, help="Gibbs sweeps")
        cmd.add_argument("--top-n", type=int, help="sentences kept per cluster")
        cmd.add_argument("--min-cluster", type=int,
                         help="cluster size below which it is kept whole")
        cmd.add_argument("--similarity-mode", choices=["tfidf", "embedding"])
        cmd.add_argument("--embeddings", help="word embedding table path")
        cmd.add_argument("-v", "--verbose", action="store_true")
    return parser


def config_from_args(args: argparse.Namespace) -> PipelineConfig:
    if args.config:
        config = PipelineConfig.from_file(args.config)
    else:
        if not args.corpus or not args.work_dir:
            raise ConfigurationError(
                "either --config or both --corpus and --work-dir are required")
        seed = args.seed if args.seed is not None else 13
        config = PipelineConfig(corpus_csv=args.corpus, work_dir=args.work_dir,
                                seed=seed, lda=LdaConfig(seed=seed))
    overrides = {}
    if args.corpus:
        overrides["corpus_csv"] = args.corpus
    if args.work_dir:
        overrides["work_dir"] = args.work_dir
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.workers is not None:
        overrides["workers"] = args.workers
    if args.limit is not None:
        overrides["limit"] = args.limit
    if args.metrics:
        overrides["metrics"] = tuple(
            m.strip() for m in args.metrics.split(",") if m.strip())
    if args.embeddings:
        overrides["embeddings_path"] = args.embeddings
    config = config.with_overrides(**overrides)
    if args.k is not None or args.sweeps is not None:
        lda_overrides = {}
        if args.k is not None:
            lda_overrides["K"] = args.k
            lda_overrides["alpha"] = None  # re-resolve 50/K
        if args.sweeps is not None:
            lda_overrides["sweeps"] = args.sweeps
            lda_overrides["burn_in"] = min(config.lda.burn_in, args.sweeps - 1)
        config = config.with_overrides(lda=replace(config.lda, **lda_overrides))
    tr_overrides = {}
    if args.top_n is not None:
        tr_overrides["top_n"] = args.top_n
    if args.min_cluster is not None:
        tr_overrides["min_cluster_sentences"] = args.min_cluster
    if args.similarity_mode:
        tr_overrides["similarity_mode"] = args.similarity_mode
    if tr_overrides:
        config = config.with_overrides(
            textrank=replace(config.textrank, **tr_overrides))
    return config


def _run_command(command: str, config: PipelineConfig) -> None:
    workspace = Workspace(config.work_dir)
    workspace.root.mkdir(parents=True, exist_ok=True)
    if command == "pipeline":
        report = run_pipeline(config)
        print(workspace.report_txt.read_text())
        print(f"run report: {workspace.run_report}")
        return
    if command == "ingest":
        manifest = stage_ingest(config, workspace)
        print(manifest.to_json())
        return
    if command == "clean":
        stage_ingest(config, workspace)
        ids, _, _ = stage_clean(config, workspace)
        print(f"cleaned {len(ids)} documents -> {workspace.cleaned}")
        return
    # later stages resume through whatever artifacts already exist
    ids, tokens, cleaner = stage_clean(config, workspace)
    model, dictionary = stage_train(config, workspace, ids, tokens)
    if command == "train":
        print(f"model: {workspace.model} (K={model.config.K}, V={dictionary.size})")
        return
    if command == "summarize":
        emitted, failed = stage_summarize(config, workspace, model, dictionary,
                                          cleaner)
        print(f"emitted {emitted} summaries ({failed} failures) "
              f"-> {workspace.generated_dir}")
        return
    stage_summarize(config, workspace, model, dictionary, cleaner)
    corpus_scores, baselines = stage_evaluate(config, workspace)
    if command == "evaluate":
        print(json.dumps(
            {m: {"precision": s.precision, "recall": s.recall, "f1": s.f1}
             for m, s in corpus_scores.items()}, indent=1, sort_keys=True))
        return
    if command == "report":
        table = stage_report(config, workspace, corpus_scores, baselines)
        print(table.to_aligned_text())
        return
    raise ConfigurationError(f"unknown command {command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = config_from_args(args)
        _run_command(args.command, config)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (TopicSumError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
