"""Command-line front end: rank, evaluate, bench, and stats.

Output files start with a manifest header (command, corpus, provider,
seed, config) so any result can be reproduced from its own header. All
timing goes into a separate section after the deterministic payload;
everything before the "# timing" marker is byte-stable across runs for
the hash provider, including across --lazy settings.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import bench as bench_mod
from . import kernels
from .config import (ConfigError, RankConfig, RunSettings, load_config,
                     validate_config)
from .datasets import CorpusFormatError, corpus_stats, load_corpus, render_stats
from .embedding import embed_batch, project
from .metrics import (DocumentEval, EvalReport, aggregate_evals,
                      intra_list_distance, match_keyphrases, prf_at_n,
                      subtopic_recall)
from .pipeline import DocumentRun, build_provider, rank_document

TIMING_MARKER = "# timing"


def split_payload(text: str) -> str:
    """Deterministic part of an output file (everything before timing)."""
    return text.split("\n" + TIMING_MARKER + "\n", 1)[0]


def _parse_alpha_list(raw: str) -> List[float]:
    try:
        alphas = [float(part) for part in raw.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"bad --alpha value {raw!r}: {exc}") from exc
    if not alphas:
        raise ConfigError(f"--alpha needs at least one value, got {raw!r}")
    return alphas


def _resolve_settings(args) -> RunSettings:
    """defaults < config file < CLI flags."""
    settings = RunSettings()
    if args.config:
        settings = load_config(args.config)
    cfg = settings.rank
    updates = {}
    if getattr(args, "alpha", None) is not None:
        alphas = _parse_alpha_list(args.alpha)
        if len(alphas) != 1 and args.command != "evaluate":
            raise ConfigError(
                f"{args.command} takes a single --alpha, got {args.alpha!r}")
        updates["alpha"] = alphas[0]
    if args.top_n is not None:
        updates["top_n"] = args.top_n
    if args.dim is not None:
        updates["dim"] = args.dim
    if args.clamp is not None:
        updates["clamp_similarity"] = args.clamp
    if updates:
        cfg = dataclasses.replace(cfg, **updates)
    validate_config(cfg)

    provider = args.provider if args.provider is not None else settings.provider
    endpoint = settings.endpoint
    if args.endpoint is not None:
        endpoint = args.endpoint
    elif not endpoint:
        endpoint = os.environ.get("KEYRANK_ENDPOINT", "")
    return RunSettings(rank=cfg, provider=provider, endpoint=endpoint)


def _manifest(command: str, corpus: str, settings: RunSettings, seed: int,
              extra: Optional[Dict] = None) -> str:
    payload = {
        "command": command,
        "corpus": corpus,
        "provider": settings.provider,
        "endpoint": settings.endpoint,
        "seed": seed,
        "config": dataclasses.asdict(settings.rank),
    }
    if extra:
        payload.update(extra)
    return json.dumps(payload, sort_keys=True)


def _write_output(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _run_corpus(docs, cfg: RankConfig, provider, *, lazy: bool, seed: int,
                workers: Optional[int]) -> Tuple[List[Optional[DocumentRun]],
                                                 List[Tuple[str, str]]]:
    """Rank every document, preserving input order; collect failures."""
    if workers is not None and workers < 1:
        raise ValueError(f"--workers must be >= 1, got {workers}")
    max_workers = workers or os.cpu_count() or 1

    def work(doc):
        return rank_document(doc, cfg, provider, lazy=lazy, seed=seed)

    runs: List[Optional[DocumentRun]] = [None] * len(docs)
    failures: List[Tuple[str, str]] = []
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = [(doc.id, pool.submit(work, doc)) for doc in docs]
        for i, (doc_id, future) in enumerate(futures):
            try:
                runs[i] = future.result()
            except Exception as exc:
                failures.append((doc_id, f"{type(exc).__name__}: {exc}"))
    return runs, failures


def cmd_rank(args) -> int:
    settings = _resolve_settings(args)
    cfg = settings.rank
    docs = load_corpus(args.corpus)
    provider = build_provider(settings, args.seed)
    runs, failures = _run_corpus(docs, cfg, provider, lazy=args.lazy,
                                 seed=args.seed, workers=args.workers)

    lines = ["# keyrank rank v1",
             "# manifest " + _manifest("rank", str(args.corpus), settings, args.seed)]
    timing_lines = []
    for run in runs:
        if run is None:
            continue
        sel = run.selection
        lines.append(json.dumps({
            "id": run.doc.id,
            "keyphrases": sel.keyphrases(),
            "gains": sel.gains(),
            "relevance": sel.relevances(),
            "objective": sel.objective_value,
        }, sort_keys=True, ensure_ascii=False))
        timing_lines.append(json.dumps({
            "id": run.doc.id,
            "extract_ms": run.times.extract_ms,
            "embed_ms": run.times.embed_ms,
            "score_ms": run.times.score_ms,
            "rank_ms": run.times.rank_ms,
            "total_ms": run.times.total_ms,
        }, sort_keys=True))

    ok_runs = [r for r in runs if r is not None]
    stages = {
        "backend": kernels.active_backend_name(),
        "extract_ms": sum(r.times.extract_ms for r in ok_runs),
        "embed_ms": sum(r.times.embed_ms for r in ok_runs),
        "score_ms": sum(r.times.score_ms for r in ok_runs),
        "rank_ms": sum(r.times.rank_ms for r in ok_runs),
        "total_ms": sum(r.times.total_ms for r in ok_runs),
    }
    lines.append(TIMING_MARKER)
    lines.extend(timing_lines)
    lines.append("# stages " + json.dumps(stages, sort_keys=True))
    _write_output("\n".join(lines) + "\n", args.output)

    for doc_id, message in failures:
        print(f"keyrank: document {doc_id} failed: {message}", file=sys.stderr)
    return 1 if failures else 0


def _evaluate_document(run: DocumentRun, cfg: RankConfig, provider, seed: int,
                       stem: bool, tau: float) -> Tuple[DocumentEval, Tuple[int, int, int]]:
    doc = run.doc
    gold = list(doc.gold or ())
    predicted = run.selection.keyphrases()
    precision, recall, f1 = prf_at_n(predicted, gold, cfg.top_n, stem=stem)
    embeddings = [item.candidate.embedding for item in run.selection.items]
    ild = intra_list_distance(embeddings)
    gold_vectors = embed_batch(provider, gold)
    if provider.native_dim != cfg.dim:
        gold_vectors = [project(v, cfg.dim, seed) for v in gold_vectors]
    gold_map = dict(zip(gold, gold_vectors))
    sr = subtopic_recall([item.candidate for item in run.selection.items],
                         gold, gold_map, tau=tau, stem=stem)
    row = DocumentEval(doc_id=doc.id, precision=precision, recall=recall,
                       f1=f1, ild=ild, sr=sr, elapsed_ms=run.times.total_ms)
    matched = match_keyphrases(predicted[:cfg.top_n], gold, stem=stem)
    counts = (len(matched), len(predicted[:cfg.top_n]), len(gold))
    return row, counts


def cmd_evaluate(args) -> int:
    settings = _resolve_settings(args)
    docs = load_corpus(args.corpus)
    missing = [d.id for d in docs if not d.gold]
    if missing:
        print("keyrank: evaluate needs gold keyphrases on every document; "
              f"missing for: {', '.join(missing)}", file=sys.stderr)
        return 2
    alphas = (_parse_alpha_list(args.alpha) if args.alpha is not None
              else [settings.rank.alpha])
    provider = build_provider(settings, args.seed)

    lines = ["# keyrank evaluate v1",
             "# manifest " + _manifest(
                 "evaluate", str(args.corpus), settings, args.seed,
                 extra={"alphas": alphas, "stem": args.stem, "tau": args.tau,
                        "micro": args.micro})]
    any_failures = False
    for alpha in alphas:
        cfg = validate_config(dataclasses.replace(settings.rank, alpha=alpha))
        runs, failures = _run_corpus(docs, cfg, provider, lazy=args.lazy,
                                     seed=args.seed, workers=args.workers)
        for doc_id, message in failures:
            any_failures = True
            print(f"keyrank: document {doc_id} failed: {message}",
                  file=sys.stderr)
        rows = []
        counts = []
        lines.append(f"# alpha {alpha!r}")
        for run in runs:
            if run is None:
                continue
            row, count = _evaluate_document(run, cfg, provider, args.seed,
                                            args.stem, args.tau)
            rows.append(row)
            counts.append(count)
            lines.append(json.dumps({"id": row.doc_id, **row.metrics()},
                                    sort_keys=True))
        report = EvalReport(
            per_doc=tuple(rows),
            aggregate=aggregate_evals(rows, micro=args.micro,
                                      micro_counts=counts))
        lines.append("# aggregate " + json.dumps(
            {"alpha": alpha, **report.aggregate}, sort_keys=True))
    _write_output("\n".join(lines) + "\n", args.output)
    return 1 if any_failures else 0


def cmd_bench(args) -> int:
    settings = _resolve_settings(args)
    if args.repetitions < 3:
        print(f"keyrank: --repetitions must be >= 3, got {args.repetitions}",
              file=sys.stderr)
        return 2
    backends = args.backends.split(",") if args.backends else None
    stage_report = None
    if args.corpus:
        docs = load_corpus(args.corpus)
        provider = build_provider(settings, args.seed)
        stage_report = bench_mod.stage_benchmark(
            docs, settings.rank, provider, repetitions=args.repetitions,
            seed=args.seed)
    series = bench_mod.scaling_series(repetitions=args.repetitions,
                                      seed=args.seed, backends=backends)
    # timings are hardware-dependent, so the report carries its environment
    environment = {
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "cpus": os.cpu_count(),
        "kernel_backends": sorted(kernels.available_backends()),
    }
    header = "# manifest " + _manifest(
        "bench", str(args.corpus), settings, args.seed,
        extra={"repetitions": args.repetitions,
               "environment": environment}) + "\n"
    _write_output(header + bench_mod.render_bench_report(stage_report, series),
                  args.output)
    return 0


def cmd_stats(args) -> int:
    docs = load_corpus(args.corpus)
    stats = corpus_stats(docs)
    header = ("# manifest " + json.dumps(
        {"command": "stats", "corpus": str(args.corpus)}, sort_keys=True) + "\n")
    _write_output(header + render_stats(stats), args.output)
    return 0


def _add_common(parser: argparse.ArgumentParser, *, corpus_required=True) -> None:
    if corpus_required:
        parser.add_argument("corpus", help="JSON-lines corpus file")
    parser.add_argument("--alpha", help="trade-off weight (evaluate accepts a "
                                        "comma-separated list)")
    parser.add_argument("--top-n", type=int, default=None)
    parser.add_argument("--dim", type=int, default=None)
    parser.add_argument("--provider", choices=("hash", "remote"), default=None)
    parser.add_argument("--endpoint", default=None,
                        help="remote embedding endpoint "
                             "(default: $KEYRANK_ENDPOINT)")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--lazy", action=argparse.BooleanOptionalAction,
                        default=False, help="use the lazy greedy ranker")
    parser.add_argument("--clamp", action=argparse.BooleanOptionalAction,
                        default=None, help="clamp similarities at 0")
    parser.add_argument("--config", default=None, help="config file")
    parser.add_argument("--output", default=None, help="output file "
                                                       "(default: stdout)")
    parser.add_argument("--workers", type=int, default=None)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="keyrank",
        description="Keyphrase extraction and ranking balancing relevance "
                    "and diversity")
    sub = parser.add_subparsers(dest="command", required=True)

    p_rank = sub.add_parser("rank", help="extract and rank keyphrases")
    _add_common(p_rank)
    p_rank.set_defaults(func=cmd_rank)

    p_eval = sub.add_parser("evaluate", help="rank and score against gold")
    _add_common(p_eval)
    p_eval.add_argument("--stem", action=argparse.BooleanOptionalAction,
                        default=True, help="match after suffix stripping")
    p_eval.add_argument("--tau", type=float, default=0.7,
                        help="gold clustering threshold for subtopic recall")
    p_eval.add_argument("--micro", action=argparse.BooleanOptionalAction,
                        default=False, help="micro-average P/R/F1")
    p_eval.set_defaults(func=cmd_evaluate)

    p_bench = sub.add_parser("bench", help="stage timings and scaling series")
    _add_common(p_bench)
    p_bench.add_argument("--repetitions", type=int, default=5)
    p_bench.add_argument("--backends", default=None,
                         help="comma list of kernel backends to time "
                              "(default: all available)")
    p_bench.set_defaults(func=cmd_bench)

    p_stats = sub.add_parser("stats", help="corpus statistics")
    p_stats.add_argument("corpus", help="JSON-lines corpus file")
    p_stats.add_argument("--output", default=None)
    p_stats.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, CorpusFormatError, FileNotFoundError, ValueError) as exc:
        print(f"keyrank: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
