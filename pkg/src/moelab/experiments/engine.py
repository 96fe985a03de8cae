"""Seeded Monte Carlo engine.

Trials are grouped into fixed-size blocks. Block ``i`` draws from the
stream ``seed.child(0, i)`` and produces a dict of per-trial columns, so
the numbers depend only on ``(seed, trials, block_size)`` and never on the
number of worker threads. Blocks are reassembled in index order before
any reduction.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Mapping

import numpy as np
from statsmodels.stats.proportion import proportion_confint

from ..geometry import SetParams
from ..haar import SeedSpec
from ..resources import guard

DEFAULT_BLOCK = 256
DEFAULT_CONFIDENCE = 0.95
BLOCK_STREAM = 0
FIXED_STREAM = 1

Sampler = Callable[[np.random.Generator, int], Mapping[str, np.ndarray]]


class TrialError(RuntimeError):
    def __init__(self, first: int, last: int, cause: BaseException):
        super().__init__(f"trial(s) {first}..{last} failed: {cause!r}")
        self.first = first
        self.last = last


@dataclass
class ExperimentConfig:
    dim_a: int
    dim_b: int
    trials: int
    seed: SeedSpec = field(default_factory=SeedSpec)
    params: SetParams | None = None
    confidence_level: float = DEFAULT_CONFIDENCE
    threads: int = 1
    block_size: int = DEFAULT_BLOCK
    csv_path: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.dim_a < 1 or self.dim_b < 1:
            raise ValueError("dimensions must be at least 1")
        if not 0 < self.confidence_level < 1:
            raise ValueError("confidence level must lie in (0, 1)")
        guard("experiment joint space |A||B|", self.dim_a * self.dim_b)

    def echo(self) -> dict:
        """Config fields that determine the numbers (threads excluded)."""
        out = {
            "dim_a": self.dim_a,
            "dim_b": self.dim_b,
            "trials": self.trials,
            "seed": {"master_seed": self.seed.master_seed, "stream_id": self.seed.stream_id},
            "confidence_level": self.confidence_level,
            "block_size": self.block_size,
        }
        if self.params is not None:
            out["params"] = asdict(self.params)
        return out


@dataclass
class ExperimentReport:
    name: str
    config: dict
    estimate: float
    ci_low: float
    ci_high: float
    analytic_bound: float | None = None
    bound_kind: str | None = None  # "upper", "lower" or None
    bound_satisfied: bool | None = None
    runtime_seconds: float = 0.0
    csv_path: str | None = None
    checks: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return _jsonable(d)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if math.isfinite(v) else None
    return x


def wilson_interval(count: int, n: int, confidence: float = DEFAULT_CONFIDENCE) -> tuple[float, float]:
    lo, hi = proportion_confint(int(count), int(n), alpha=1.0 - confidence, method="wilson")
    p = count / n
    return float(min(max(lo, 0.0), p)), float(max(min(hi, 1.0), p))


def run_trials(
    sampler: Sampler,
    trials: int,
    seed: SeedSpec,
    *,
    threads: int = 1,
    block_size: int = DEFAULT_BLOCK,
) -> dict[str, np.ndarray]:
    """Run ``sampler`` over ``trials`` draws and return concatenated columns."""
    starts = list(range(0, trials, block_size))

    def block(i: int):
        first = starts[i]
        n = min(block_size, trials - first)
        rng = seed.child(BLOCK_STREAM, i).generator()
        try:
            cols = sampler(rng, n)
        except Exception as exc:
            raise TrialError(first, first + n - 1, exc) from exc
        for k, v in cols.items():
            if np.shape(v)[0] != n:
                raise TrialError(first, first + n - 1, ValueError(f"column {k!r} has wrong length"))
        return cols

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(block, range(len(starts))))
    else:
        parts = [block(i) for i in range(len(starts))]
    return {k: np.concatenate([np.asarray(p[k]) for p in parts]) for k in parts[0]}


def fixed_generator(seed: SeedSpec, key: int = 0) -> np.random.Generator:
    """Stream for objects held fixed across all trials (reference vectors)."""
    return seed.child(FIXED_STREAM, key).generator()


def write_csv(path: str | Path, columns: Mapping[str, np.ndarray]) -> str:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    rows = zip(*(np.asarray(columns[k]).tolist() for k in names))
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        for row in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return str(path)


def probability_report(
    name: str,
    config: dict,
    hits: np.ndarray,
    *,
    confidence: float = DEFAULT_CONFIDENCE,
    bound: float | None = None,
    bound_kind: str | None = None,
    runtime: float = 0.0,
) -> ExperimentReport:
    """Frequency of ``hits`` with a Wilson interval and an optional bound check.

    An upper bound is deemed satisfied when the interval's lower end is at
    most ``min(1, bound)``; a lower bound when the upper end is at least
    the bound. Noise can therefore never manufacture a pass.
    """
    hits = np.asarray(hits, dtype=bool)
    n = hits.size
    count = int(np.count_nonzero(hits))
    lo, hi = wilson_interval(count, n, confidence)
    report = ExperimentReport(name, config, count / n, lo, hi, runtime_seconds=runtime)
    if bound is not None:
        report.analytic_bound = float(bound)
        report.bound_kind = bound_kind
        if bound_kind == "upper":
            report.bound_satisfied = lo <= min(1.0, bound)
            if bound >= 1.0:
                report.warnings.append(f"analytic bound {bound:.4g} >= 1 is vacuous at these parameters")
        elif bound_kind == "lower":
            report.bound_satisfied = hi >= bound
        else:
            raise ValueError("bound_kind must be 'upper' or 'lower'")
    report.details["count"] = count
    return report


def estimate_probability(
    config: ExperimentConfig,
    event: Callable[[np.random.Generator, int], np.ndarray],
    *,
    name: str = "probability",
    bound: float | None = None,
    bound_kind: str | None = None,
) -> ExperimentReport:
    """Empirical frequency of a vectorized event.

    ``event(rng, n)`` returns ``n`` booleans. If a bound is given its check
    is recorded as the report's only assertion.
    """
    t0 = time.perf_counter()
    cols = run_trials(
        lambda rng, n: {"event": np.asarray(event(rng, n), dtype=bool)},
        config.trials,
        config.seed,
        threads=config.threads,
        block_size=config.block_size,
    )
    report = probability_report(
        name,
        config.echo(),
        cols["event"],
        confidence=config.confidence_level,
        bound=bound,
        bound_kind=bound_kind,
        runtime=time.perf_counter() - t0,
    )
    if report.bound_satisfied is not None:
        report.checks["bound"] = report.bound_satisfied
    if config.csv_path:
        report.csv_path = write_csv(config.csv_path, cols)
    return report


def intersection_bound_holds(m: np.ndarray, n: np.ndarray) -> bool:
    """``#(M ∩ N) >= #M - #(not N)`` on a joint trial log (exact integers)."""
    m = np.asarray(m, dtype=bool)
    n = np.asarray(n, dtype=bool)
    return int(np.count_nonzero(m & n)) >= int(np.count_nonzero(m)) - int(np.count_nonzero(~n))
