"""Monte Carlo runs of the four e-values under Markov and mixture data.

A run generates ``K`` independent sequences, evaluates the requested
statistics as decimal logarithms and summarises them. Replications are
processed in chunks, optionally across worker processes; because every
replication has its own random stream the raw records are identical for any
chunking or worker count.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .errors import ConfigError, ReducibleChainError
from .evalues import BOUND_TOL_LOG10, log_statistics, mep_asymptotic_constant
from .markov_sim import GENERATOR_NAME, GeneratorKind, GeneratorSpec, generate_batch, stationary
from .numerics import LN10

STATISTICS = ("elb", "lb", "ub", "umm")
QUANTILES = (5, 25, 50, 75, 95)
CSV_COLUMNS = ("replication_index", "N1", "log10_elb", "log10_lb", "log10_ub", "log10_umm")

# Float budget per chunk of generated uniforms.
_CHUNK_FLOATS = 2**23

WORKERS_ENV = "EXCHTEST_WORKERS"


@dataclass(frozen=True)
class ExperimentSpec:
    generator: GeneratorSpec
    K: int
    statistics: tuple = STATISTICS
    ub_stationary: Optional[tuple] = None

    def __post_init__(self):
        if self.K < 1:
            raise ConfigError("K must be at least 1")
        stats = tuple(s.lower() for s in self.statistics)
        unknown = set(stats) - set(STATISTICS)
        if unknown:
            raise ConfigError(f"unknown statistics: {sorted(unknown)}")
        object.__setattr__(self, "statistics", tuple(s for s in STATISTICS if s in stats))
        if self.ub_stationary is not None:
            pi0, pi1 = map(float, self.ub_stationary)
            if not (0 < pi0 < 1 and 0 < pi1 < 1) or abs(pi0 + pi1 - 1) > 1e-12:
                raise ConfigError("ub_stationary must be two probabilities in (0, 1) summing to 1")
            object.__setattr__(self, "ub_stationary", (pi0, pi1))
        if "ub" in self.statistics:
            self.resolve_ub_stationary()

    @property
    def seed(self) -> int:
        return self.generator.seed

    def resolve_ub_stationary(self) -> tuple[float, float]:
        """Stationary pair used by UB: the override, else derived from the generator."""
        if self.ub_stationary is not None:
            return self.ub_stationary
        gen = self.generator
        if gen.kind is GeneratorKind.FIXED_MARKOV:
            try:
                return stationary(gen.params)
            except ReducibleChainError as exc:
                raise ConfigError("UB needs a stationary distribution; pass ub_stationary") from exc
        if gen.kind is GeneratorKind.IID_BERNOULLI:
            return (1.0 - gen.p, gen.p)
        raise ConfigError("UB under the mixture generator needs an explicit ub_stationary")

    def to_dict(self) -> dict:
        return {
            "generator": self.generator.to_dict(),
            "K": self.K,
            "statistics": list(self.statistics),
            "ub_stationary": list(self.resolve_ub_stationary()) if "ub" in self.statistics else None,
        }


@dataclass
class StatisticSummary:
    mean: float
    std: float
    quantiles: dict


@dataclass
class ExperimentSummary:
    N: int
    K: int
    statistics: dict  # name -> StatisticSummary
    diff_mean: Optional[float]
    bound_log10: float
    loose_bound_log10: float
    asymptotic_log10: float
    n_degenerate: int
    tight_bound_exceeded: int  # among non-constant sequences only

    def to_dict(self) -> dict:
        d = {
            "N": self.N,
            "K": self.K,
            "statistics": {
                k: {"mean": v.mean, "std": v.std, "quantiles": {str(q): x for q, x in v.quantiles.items()}}
                for k, v in self.statistics.items()
            },
            "diff_mean": self.diff_mean,
            "bound_log10": self.bound_log10,
            "loose_bound_log10": self.loose_bound_log10,
            "asymptotic_log10": self.asymptotic_log10,
            "n_degenerate": self.n_degenerate,
            "tight_bound_exceeded": self.tight_bound_exceeded,
        }
        return d


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    records: dict = field(repr=False)  # column -> array of length K
    summary: ExperimentSummary = None


def asymptotic_log10(N: int) -> float:
    """Asymptotic mean log10 UMM (and ELB) under the mixture: N * c / ln 10."""
    return N * mep_asymptotic_constant() / LN10


def batch_counts(bits: np.ndarray) -> dict[str, np.ndarray]:
    """Transition counts, first/last bits and number of ones for each row."""
    bits = bits.astype(np.uint8, copy=False)
    prev, nxt = bits[:, :-1], bits[:, 1:]
    n11 = np.count_nonzero(prev & nxt, axis=1)
    n01 = np.count_nonzero(nxt > prev, axis=1)
    n10 = np.count_nonzero(prev > nxt, axis=1)
    n00 = bits.shape[1] - 1 - n11 - n01 - n10
    return {
        "n00": n00, "n01": n01, "n10": n10, "n11": n11,
        "first": bits[:, 0].astype(np.int64), "last": bits[:, -1].astype(np.int64),
        "n1": np.count_nonzero(bits, axis=1),
    }


def _run_chunk(args) -> dict:
    spec, start, count = args
    gen = spec.generator
    batch = generate_batch(gen, start, count)
    c = batch_counts(batch.bits)
    st = spec.resolve_ub_stationary() if "ub" in spec.statistics else None
    logs = log_statistics(c["n00"], c["n01"], c["n10"], c["n11"], c["last"], stationary=st)
    out = {
        "replication_index": np.arange(start, start + count, dtype=np.int64),
        "N1": c["n1"].astype(np.int64),
    }
    for name in STATISTICS:
        if name in spec.statistics:
            out[f"log10_{name}"] = logs[name] / LN10
        else:
            out[f"log10_{name}"] = np.full(count, np.nan)
    diff = logs["umm"] / LN10 - logs["elb"] / LN10
    n = gen.N
    bad = (diff < -BOUND_TOL_LOG10) | (diff > math.log10(2 * n) + BOUND_TOL_LOG10)
    if bad.any():
        i = int(np.argmax(bad))
        raise RuntimeError(f"UMM/ELB bound violated at replication {start + i}: log10 ratio {diff[i]}")
    return out


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def run(spec: ExperimentSpec, workers: Optional[int] = None, chunk_size: Optional[int] = None) -> ExperimentResult:
    n = spec.generator.N
    chunk = chunk_size or max(1, _CHUNK_FLOATS // (n + 2))
    jobs = [(spec, s, min(chunk, spec.K - s)) for s in range(0, spec.K, chunk)]
    workers = workers or default_workers()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(j) for j in jobs]
    records = {col: np.concatenate([p[col] for p in parts]) for col in CSV_COLUMNS}
    result = ExperimentResult(spec, records)
    result.summary = summarise(spec, records)
    return result


def summarise(spec: ExperimentSpec, records: dict) -> ExperimentSummary:
    n = spec.generator.N
    stats = {}
    for name in spec.statistics:
        x = records[f"log10_{name}"]
        qs = np.percentile(x, QUANTILES)
        stats[name] = StatisticSummary(float(np.mean(x)), float(np.std(x)), dict(zip(QUANTILES, map(float, qs))))
    diff_mean = None
    diff = records["log10_umm"] - records["log10_elb"]
    if "umm" in spec.statistics and "elb" in spec.statistics:
        diff_mean = float(np.mean(diff))
    n1 = records["N1"]
    degenerate = (n1 == 0) | (n1 == n)
    exceeded = int(np.count_nonzero(~degenerate & (diff > math.log10(n) + BOUND_TOL_LOG10)))
    return ExperimentSummary(
        N=n,
        K=spec.K,
        statistics=stats,
        diff_mean=diff_mean,
        bound_log10=math.log10(n),
        loose_bound_log10=math.log10(2 * n),
        asymptotic_log10=asymptotic_log10(n),
        n_degenerate=int(np.count_nonzero(degenerate)),
        tight_bound_exceeded=exceeded,
    )


def _fmt(x: float) -> str:
    return "" if math.isnan(x) else repr(float(x))


def write_csv(path, records: dict) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        cols = [records[c] for c in CSV_COLUMNS]
        for row in zip(*cols):
            w.writerow([int(row[0]), int(row[1])] + [_fmt(v) for v in row[2:]])


def metadata(spec: ExperimentSpec) -> dict:
    return {
        "version": __version__,
        "seed": spec.seed,
        "generator_algorithm": GENERATOR_NAME,
    }


def write_json(path, result: ExperimentResult) -> None:
    doc = {
        "metadata": metadata(result.spec),
        "spec": result.spec.to_dict(),
        "summary": result.summary.to_dict(),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def format_rows(summary: ExperimentSummary, spec: ExperimentSpec) -> str:
    """Aligned summary rows for the text report."""
    s = summary.statistics
    gen = spec.generator
    lines = []
    if "elb" in s and "umm" in s:
        label = (
            f"pi01={gen.params.pi01:g} pi10={gen.params.pi10:g}"
            if gen.kind is GeneratorKind.FIXED_MARKOV
            else f"K={summary.K}"
        )
        lines.append(f"{'N':>8} {'setting':>22} {'mean ELB':>10} {'mean UMM':>10} {'diff':>8} {'bound':>8}")
        lines.append(
            f"{summary.N:>8} {label:>22} {s['elb'].mean:>10.3f} {s['umm'].mean:>10.3f} "
            f"{summary.diff_mean:>8.3f} {summary.bound_log10:>8.3f}"
        )
    lines.append("")
    lines.append(f"{'stat':>5} {'mean':>10} {'std':>10}  quantiles {list(QUANTILES)}%")
    for name, v in s.items():
        qs = ", ".join(f"{q:.2f}" for q in v.quantiles.values())
        lines.append(f"{name.upper():>5} {v.mean:>10.3f} {v.std:>10.3f}  [{qs}]")
    lines.append(f"as. (asymptotic mean log10 UMM under the mixture) = {summary.asymptotic_log10:.2f}")
    lines.append(
        f"constant sequences: {summary.n_degenerate}; "
        f"non-constant sequences with diff > log10 N: {summary.tight_bound_exceeded}"
    )
    return "\n".join(lines)
