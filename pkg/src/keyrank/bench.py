"""Wall-clock benchmarks: per-stage times and the candidate-count scaling series.

The scaling series times the selection kernels on synthetic instances of
growing candidate count M at fixed N and embedding dim, which is where
the linear-in-M behavior of the greedy loop shows up. Instances are
built once per M outside the timed region; each timing sample runs the
kernel ``inner`` times and the reported value is the median across
repetitions. When both kernel backends are importable the series times
them side by side.
"""

from __future__ import annotations

import statistics
import time
from typing import Dict, Iterable, Optional, Sequence

import numpy as np

from . import kernels
from .config import RankConfig
from .model import Candidate
from .objective import ScoredInstance, score_instance
from .pipeline import rank_document

SCALING_SIZES = (250, 500, 1000, 2000, 4000)


def synthetic_instance(m: int, d: int, seed: int, alpha: float = 0.5):
    """Random clamped instance of m candidates with d-dim embeddings."""
    rng = np.random.default_rng([seed % (2 ** 63), m, d])
    emb = rng.standard_normal((m, d))
    emb /= np.linalg.norm(emb, axis=1, keepdims=True)
    doc_vec = rng.standard_normal(d)
    doc_vec /= np.linalg.norm(doc_vec)
    candidates = [
        Candidate(surface=f"c{i}", normalized=f"c{i}", position=i,
                  length_tokens=1, embedding=emb[i])
        for i in range(m)
    ]
    cfg = RankConfig(alpha=alpha, top_n=5, dim=d, clamp_similarity=True)
    inst = score_instance(candidates, doc_vec, cfg)
    tie_rank = np.arange(m, dtype=np.int64)
    return inst, tie_rank


def _time_select(select_fn, inst: ScoredInstance, tie_rank, top_n: int,
                 repetitions: int, inner: int) -> float:
    """Median milliseconds per call over ``repetitions`` samples."""
    rel = np.ascontiguousarray(inst.relevance)
    sim = np.ascontiguousarray(inst.sim)
    select_fn(rel, sim, inst.alpha, top_n, tie_rank)  # warm-up
    samples = []
    for _ in range(repetitions):
        start = time.perf_counter()
        for _ in range(inner):
            select_fn(rel, sim, inst.alpha, top_n, tie_rank)
        samples.append((time.perf_counter() - start) * 1000.0 / inner)
    return statistics.median(samples)


def scaling_series(sizes: Sequence[int] = SCALING_SIZES, *, top_n: int = 5,
                   d: int = 64, repetitions: int = 5, inner: int = 20,
                   seed: int = 42,
                   backends: Optional[Iterable[str]] = None) -> Dict:
    """Time naive and lazy selection across candidate counts.

    Returns {"sizes": [...], "top_n": N, "dim": d, "backends": {name:
    {m: {"naive_ms": ..., "lazy_ms": ...}}}, "ratios": {name: r}} where r
    is naive time at the largest size divided by naive time at the size
    a quarter as large (the linearity figure of merit for the default
    250..4000 series).
    """
    if repetitions < 3:
        raise ValueError(f"repetitions must be >= 3, got {repetitions}")
    if backends is None:
        names = sorted(kernels.available_backends())
    else:
        names = list(backends)
    instances = {m: synthetic_instance(m, d, seed) for m in sizes}
    results: Dict[str, Dict[int, Dict[str, float]]] = {}
    for name in names:
        module = kernels.get_backend(name)
        per_size = {}
        for m in sizes:
            inst, tie_rank = instances[m]
            per_size[m] = {
                "naive_ms": _time_select(module.greedy_select, inst, tie_rank,
                                         top_n, repetitions, inner),
                "lazy_ms": _time_select(module.lazy_greedy_select, inst,
                                        tie_rank, top_n, repetitions, inner),
            }
        results[name] = per_size
    ratios = {}
    largest = max(sizes)
    quarter = largest // 4
    if quarter in instances:
        for name, per_size in results.items():
            ratios[name] = per_size[largest]["naive_ms"] / per_size[quarter]["naive_ms"]
    return {"sizes": list(sizes), "top_n": top_n, "dim": d,
            "repetitions": repetitions, "backends": results, "ratios": ratios}


def stage_benchmark(docs, cfg: RankConfig, provider, *, repetitions: int = 5,
                    seed: int = 42) -> Dict:
    """Median per-stage wall time per document on a real corpus."""
    if repetitions < 3:
        raise ValueError(f"repetitions must be >= 3, got {repetitions}")
    per_doc = []
    for doc in docs:
        stage_samples = {"extract_ms": [], "embed_ms": [], "score_ms": [],
                         "rank_ms": []}
        for _ in range(repetitions):
            run = rank_document(doc, cfg, provider, seed=seed)
            stage_samples["extract_ms"].append(run.times.extract_ms)
            stage_samples["embed_ms"].append(run.times.embed_ms)
            stage_samples["score_ms"].append(run.times.score_ms)
            stage_samples["rank_ms"].append(run.times.rank_ms)
        medians = {stage: statistics.median(vals)
                   for stage, vals in stage_samples.items()}
        medians["total_ms"] = sum(medians.values())
        per_doc.append({"id": doc.id, **medians})
    return {"repetitions": repetitions, "per_doc": per_doc}


def render_bench_report(stage_report: Optional[Dict], series: Dict) -> str:
    """Human-readable benchmark report, plot-ready tabular text."""
    lines = []
    if stage_report is not None:
        lines.append("# per-document stage medians (ms), "
                     f"repetitions={stage_report['repetitions']}")
        lines.append("id extract_ms embed_ms score_ms rank_ms total_ms")
        for row in stage_report["per_doc"]:
            lines.append(
                f"{row['id']} {row['extract_ms']:.3f} {row['embed_ms']:.3f} "
                f"{row['score_ms']:.3f} {row['rank_ms']:.3f} {row['total_ms']:.3f}")
        lines.append("")
    lines.append(f"# selection scaling series: top_n={series['top_n']} "
                 f"dim={series['dim']} repetitions={series['repetitions']}")
    for name, per_size in series["backends"].items():
        lines.append(f"backend {name}")
        lines.append("M naive_ms lazy_ms")
        for m in series["sizes"]:
            row = per_size[m]
            lines.append(f"{m} {row['naive_ms']:.4f} {row['lazy_ms']:.4f}")
        if name in series["ratios"]:
            largest = max(series["sizes"])
            lines.append(f"ratio naive {largest}/{largest // 4}: "
                         f"{series['ratios'][name]:.3f}")
        lines.append("")
    return "\n".join(lines)
