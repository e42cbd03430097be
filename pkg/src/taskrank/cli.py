"""Command-line front end.

Subcommands: index-stats, run, eval, classify, select-terms, priors, sweep.
Option precedence is flags > --config file (JSON) > built-in defaults. The
TASKRANK_THREADS environment variable bounds the per-topic worker pool.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from .corpus import load_collection
from .errors import TaskRankError
from .evaluation import evaluate_run, parse_qrels, parse_run, residual_filter, sweep, write_run
from .fusion import FusionConfig
from .indexing import Bm25Params, IndexVariant, InvertedIndex
from .pipeline import PipelineConfig, RunVariant, execute_run
from .querygen import ConfidenceMode, ExpansionConfig, LexiconExtractor, default_lexicon, select_task_terms
from .rerank import RerankConfig, build_journal_priors, build_per_task_priors, export_priors
from .tasks import (
    AssignmentSource,
    TaskAssignment,
    TaskClassifier,
    agreement,
    default_framework,
    load_manual_map,
    load_tasks,
    load_topics,
)


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise TaskRankError("config file must contain a JSON object")
    return data


def _pick(args, file_cfg: dict, key: str, default):
    value = getattr(args, key.replace("-", "_"), None)
    if value is not None:
        return value
    if key in file_cfg:
        return file_cfg[key]
    return default


def _expansion_from(args, file_cfg: dict) -> ExpansionConfig:
    return ExpansionConfig(
        n_task_terms=int(_pick(args, file_cfg, "n_task_terms", 3)),
        dup_query=int(_pick(args, file_cfg, "dup_query", 3)),
        dup_question=int(_pick(args, file_cfg, "dup_question", 3)),
        dup_task=int(_pick(args, file_cfg, "dup_task", 1)),
        confidence_mode=ConfidenceMode(
            _pick(args, file_cfg, "confidence_mode", "ignore")
        ),
        gate_threshold=int(_pick(args, file_cfg, "gate_threshold", 3)),
        route_task_terms_fulltext_only=bool(
            _pick(args, file_cfg, "route_task_terms", True)
        ),
    )


def _pipeline_config(args, default_variant: str = "query") -> PipelineConfig:
    file_cfg = _load_config_file(getattr(args, "config", None))
    alpha = _pick(args, file_cfg, "alpha", None)
    return PipelineConfig(
        corpus_path=_pick(args, file_cfg, "corpus", None),
        topics_path=_pick(args, file_cfg, "topics", None),
        variant=RunVariant(_pick(args, file_cfg, "variant", default_variant)),
        tasks_path=_pick(args, file_cfg, "tasks", None),
        manual_map_path=_pick(args, file_cfg, "manual_map", None),
        lexicon_path=_pick(args, file_cfg, "lexicon", None),
        qrels_path=_pick(args, file_cfg, "qrels", None),
        vectors_path=_pick(args, file_cfg, "vectors", None),
        run_tag=_pick(args, file_cfg, "run_tag", None),
        bm25=Bm25Params(
            k1=float(_pick(args, file_cfg, "k1", 0.9)),
            b=float(_pick(args, file_cfg, "b", 0.4)),
        ),
        fusion=FusionConfig(rrf_k=float(_pick(args, file_cfg, "rrf_k", 60.0))),
        expansion=_expansion_from(args, file_cfg),
        rerank=None if alpha is None else RerankConfig(alpha=float(alpha)),
        top_k=int(_pick(args, file_cfg, "top_k", 1000)),
    )


def cmd_index_stats(args) -> int:
    collection = load_collection(args.corpus, strict=False)
    if collection.skipped_records:
        print(f"skipped {collection.skipped_records} malformed records", file=sys.stderr)
    variants = list(IndexVariant) if args.variant == "all" else [IndexVariant(args.variant)]
    print(f"{'variant':<16} {'docs':>8} {'units':>8} {'avg_len':>10} {'vocab':>8}")
    for variant in variants:
        index = InvertedIndex(collection, variant)
        print(
            f"{variant.value:<16} {index.doc_count:>8} {index.unit_count:>8} "
            f"{index.avg_unit_length:>10.2f} {len(index.postings):>8}"
        )
    return 0


def cmd_run(args) -> int:
    config = _pipeline_config(args)
    if not config.corpus_path or not config.topics_path:
        raise TaskRankError("run requires --corpus and --topics")
    run = execute_run(config, threads=args.threads)
    try:
        write_run(run, args.output)
    except BaseException:
        if os.path.exists(args.output):
            os.unlink(args.output)
        raise
    retrieved = sum(len(r) for r in run.rankings.values())
    print(f"wrote {args.output}: {len(run.rankings)} topics, {retrieved} results")
    return 0


def cmd_eval(args) -> int:
    run = parse_run(args.run)
    qrels = parse_qrels(args.qrels)
    if args.residual_qrels:
        run = residual_filter(run, parse_qrels(args.residual_qrels))
    unjudged = [t for t in run.topic_ids() if t not in qrels.topic_ids()]
    if unjudged:
        print(f"warning: no judgments for topics {unjudged}; scored 0", file=sys.stderr)
    report = evaluate_run(run, qrels, k=args.k)
    if args.json:
        print(
            json.dumps(
                {
                    "k": report.k,
                    "topics": {
                        str(t): {"ndcg": report.ndcg[t], "ap": report.ap[t]}
                        for t in sorted(report.ndcg)
                    },
                    "mean_ndcg": report.mean_ndcg,
                    "mean_map": report.mean_ap,
                    "topic_count": report.topic_count,
                }
            )
        )
        return 0
    print(f"{'topic':<8} {'ndcg@' + str(report.k):<10} {'ap':<10}")
    for topic_id in sorted(report.ndcg):
        print(f"{topic_id:<8} {report.ndcg[topic_id]:<10.4f} {report.ap[topic_id]:<10.4f}")
    print(f"{'all':<8} {report.mean_ndcg:<10.4f} {report.mean_ap:<10.4f}")
    return 0


def cmd_classify(args) -> int:
    topics = load_topics(args.topics)
    framework = load_tasks(args.tasks) if args.tasks else default_framework()
    classifier = TaskClassifier(framework)
    predictions = {t.topic_id: classifier.classify(t.query) for t in topics}
    print(f"{'topic':<8} {'task':<28} {'low_confidence'}")
    for topic in topics:
        pred = predictions[topic.topic_id]
        print(f"{topic.topic_id:<8} {pred.task_id:<28} {'yes' if pred.low_confidence else 'no'}")
    if args.manual_map:
        manual = load_manual_map(args.manual_map, framework)
        automatic = [
            TaskAssignment(topic_id=t, task_id=p.task_id, source=AssignmentSource.AUTOMATIC)
            for t, p in predictions.items()
        ]
        print(f"agreement {agreement(manual, automatic):.4f}")
    return 0


def cmd_select_terms(args) -> int:
    collection = load_collection(args.corpus, strict=False)
    framework = load_tasks(args.tasks) if args.tasks else default_framework()
    extractor = (
        LexiconExtractor.from_file(args.lexicon) if args.lexicon else default_lexicon()
    )
    abstracts_index = InvertedIndex(collection, IndexVariant.TITLE_ABSTRACT)
    for task in framework:
        terms = select_task_terms(task, abstracts_index, extractor, args.n)
        print(f"{task.task_id}\t{', '.join(terms)}")
    return 0


def cmd_priors(args) -> int:
    qrels = parse_qrels(args.qrels)
    collection = load_collection(args.corpus, strict=False)
    if args.per_task:
        if not args.manual_map:
            raise TaskRankError("--per-task requires --manual-map")
        framework = load_tasks(args.tasks) if args.tasks else default_framework()
        manual = load_manual_map(args.manual_map, framework)
        tables = build_per_task_priors(qrels, collection, manual)
        text = "".join(
            f"{task_id}\t{line}\n"
            for task_id, table in tables.items()
            for line in export_priors(table).splitlines()
        )
    else:
        text = export_priors(build_journal_priors(qrels, collection))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_sweep(args) -> int:
    grid: list[ExpansionConfig] = []
    with open(args.grid, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            record = json.loads(line)
            grid.append(
                ExpansionConfig(
                    n_task_terms=int(record.get("n_task_terms", 3)),
                    dup_query=int(record.get("dup_query", 3)),
                    dup_question=int(record.get("dup_question", 3)),
                    dup_task=int(record.get("dup_task", 1)),
                    confidence_mode=ConfidenceMode(record.get("confidence_mode", "ignore")),
                    gate_threshold=int(record.get("gate_threshold", 3)),
                    route_task_terms_fulltext_only=bool(record.get("route_task_terms", True)),
                )
            )
    base = _pipeline_config(args, default_variant="query+task")
    if not base.corpus_path or not base.topics_path:
        raise TaskRankError("sweep requires --corpus and --topics")
    qrels = parse_qrels(args.qrels)

    def run_cell(expansion: ExpansionConfig):
        return execute_run(replace(base, expansion=expansion), threads=args.threads)

    rows = sweep(grid, run_cell, qrels, k=args.k)
    header = f"{'ndcg@' + str(args.k):<10} {'map':<10} config"
    print(header)
    for row in rows:
        if row.error is not None:
            print(f"{'-':<10} {'-':<10} {_expansion_label(row.config)}  FAILED: {row.error}")
        else:
            print(
                f"{row.mean_ndcg:<10.4f} {row.mean_ap:<10.4f} {_expansion_label(row.config)}"
            )
    return 0 if any(row.error is None for row in rows) else 1


def _expansion_label(config: ExpansionConfig) -> str:
    return (
        f"{config.dup_query} query : {config.dup_question} question : "
        f"{config.dup_task} task, n={config.n_task_terms}"
    )


def _add_pipeline_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--corpus", help="corpus file (JSON lines)")
    p.add_argument("--topics", help="topics file (JSON lines)")
    p.add_argument("--tasks", help="task framework file; default: shipped tasks")
    p.add_argument("--manual-map", dest="manual_map", help="manual topic-task map")
    p.add_argument("--lexicon", help="term lexicon file; default: shipped lexicon")
    p.add_argument("--qrels", help="qrels file (journal prior variants)")
    p.add_argument("--vectors", help="vectors file (vector variant)")
    p.add_argument("--config", help="JSON config file; flags take precedence")
    p.add_argument("--run-tag", dest="run_tag", help="run tag; default: variant name")
    p.add_argument("--k1", type=float, help="BM25 k1 (default 0.9)")
    p.add_argument("--b", type=float, help="BM25 b (default 0.4)")
    p.add_argument("--rrf-k", dest="rrf_k", type=float, help="RRF constant (default 60)")
    p.add_argument("--top-k", dest="top_k", type=int, help="results per topic (default 1000)")
    p.add_argument("--n-task-terms", dest="n_task_terms", type=int)
    p.add_argument("--dup-query", dest="dup_query", type=int)
    p.add_argument("--dup-question", dest="dup_question", type=int)
    p.add_argument("--dup-task", dest="dup_task", type=int)
    p.add_argument(
        "--confidence-mode",
        dest="confidence_mode",
        choices=[m.value for m in ConfidenceMode],
    )
    p.add_argument("--gate-threshold", dest="gate_threshold", type=int)
    p.add_argument(
        "--route-task-terms",
        dest="route_task_terms",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="restrict task terms to the full-text index (default on)",
    )
    p.add_argument("--alpha", type=float, help="re-rank retrieval weight")
    p.add_argument("--threads", type=int, help="worker pool size; TASKRANK_THREADS otherwise")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taskrank", description="Task-aware BM25 ranking and evaluation harness"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index-stats", help="print index statistics per variant")
    p.add_argument("--corpus", required=True)
    p.add_argument(
        "--variant", default="all", choices=["all"] + [v.value for v in IndexVariant]
    )
    p.set_defaults(func=cmd_index_stats)

    p = sub.add_parser("run", help="produce a TREC-format run file")
    _add_pipeline_options(p)
    p.add_argument("--variant", choices=[v.value for v in RunVariant])
    p.add_argument("--output", required=True, help="run file to write")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("eval", help="score a run file against qrels")
    p.add_argument("--run", required=True)
    p.add_argument("--qrels", required=True)
    p.add_argument("--k", type=int, default=20)
    p.add_argument("--residual-qrels", dest="residual_qrels", help="filter judged docs first")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("classify", help="assign topics to tasks automatically")
    p.add_argument("--topics", required=True)
    p.add_argument("--tasks")
    p.add_argument("--manual-map", dest="manual_map")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("select-terms", help="show top task terms by TF-IDF")
    p.add_argument("--corpus", required=True)
    p.add_argument("--tasks")
    p.add_argument("--lexicon")
    p.add_argument("--n", type=int, default=3)
    p.set_defaults(func=cmd_select_terms)

    p = sub.add_parser("priors", help="build journal prior tables from qrels")
    p.add_argument("--qrels", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--per-task", dest="per_task", action="store_true")
    p.add_argument("--manual-map", dest="manual_map")
    p.add_argument("--tasks")
    p.add_argument("--output")
    p.set_defaults(func=cmd_priors)

    p = sub.add_parser("sweep", help="grid-sweep expansion configs")
    _add_pipeline_options(p)
    p.add_argument("--variant", choices=[v.value for v in RunVariant])
    p.add_argument("--grid", required=True, help="JSON-lines grid of expansion configs")
    p.add_argument("--k", type=int, default=20)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TaskRankError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
