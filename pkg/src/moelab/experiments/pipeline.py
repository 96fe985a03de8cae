"""End-to-end additivity check at toy scale.

For each sampled unitary the pipeline estimates ``S_min(E)``, ``S_min(Ē)``
and an upper bound on ``S_min(E ⊗ Ē)``, then reports the additivity gap.
The violation mechanism needs dimensions far beyond a workstation, so a
positive gap is not expected; the report says so explicitly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .. import channel as ch
from ..entropy import hayden_check
from ..geometry import C0, SetParams, in_X_witnessed, in_Y
from ..haar import SeedSpec, haar_states, haar_unitary
from ..linalg import max_entangled
from ..minent import min_output_entropy
from ..resources import guard
from .engine import DEFAULT_CONFIDENCE, _jsonable, wilson_interval, write_csv

NO_VIOLATION_NOTE = "no violation expected at these dimensions"
UNITARY_KINDS = ("haar", "identity", "swap")
SUBADDITIVITY_SLACK = 2e-3
HAYDEN_SLACK = 1e-8


@dataclass
class PipelineReport:
    config: dict
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    runtime_seconds: float = 0.0
    csv_path: str | None = None

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return _jsonable({
            "name": "pipeline",
            "config": self.config,
            "rows": self.rows,
            "summary": self.summary,
            "checks": self.checks,
            "notes": self.notes,
            "runtime_seconds": self.runtime_seconds,
            "csv_path": self.csv_path,
            "passed": self.passed,
        })


def _unitary(kind: str, dim_a: int, dim_b: int, seed: SeedSpec) -> np.ndarray:
    if kind == "haar":
        return haar_unitary(dim_a * dim_b, seed)
    if kind == "identity":
        return ch.identity_unitary(dim_a, dim_b)
    if kind == "swap":
        if dim_a != dim_b:
            raise ValueError("the swap unitary needs dim_a == dim_b")
        return ch.swap_unitary(dim_a)
    raise ValueError(f"unknown unitary kind {kind!r}")


def counterexample_pipeline(
    dim_a: int,
    dim_b: int,
    c: float,
    a: float,
    unitary_samples: int,
    seed: SeedSpec = SeedSpec(),
    *,
    starts: int = 20,
    haar_inputs: int = 200,
    tube_n: float | None = None,
    unitary: str = "haar",
    threads: int = 1,
    csv_path: str | None = None,
) -> PipelineReport:
    """Additivity gap ``S_min(E) + S_min(Ē) - S_min(E ⊗ Ē)`` per unitary.

    The product-channel value is an upper bound: the smaller of the
    optimizer (seeded with the maximally entangled input and with the
    product of the single-channel minimizers) and the entropy on the
    maximally entangled input.

    X membership uses the channel's own low-entropy output as the only
    witness, with tube width parameter ``tube_n`` (default ``|A|``).
    """
    if unitary not in UNITARY_KINDS:
        raise ValueError(f"unknown unitary kind {unitary!r}")
    if unitary_samples < 1:
        raise ValueError("unitary_samples must be at least 1")
    guard("product channel E ⊗ Ē", (dim_a * dim_b) ** 2)
    t0 = time.perf_counter()
    n_tube = float(dim_a if tube_n is None else tube_n)
    params = SetParams(dim_b, n_tube, c, a)
    log_b = float(np.log2(dim_b))
    hayden_ceiling = 2 * log_b - log_b / dim_b
    threshold = (log_b - 2 * c) / dim_b
    phi = max_entangled(dim_a)

    report = PipelineReport(config={
        "dim_a": dim_a, "dim_b": dim_b, "c": c, "a": a, "unitary_samples": unitary_samples,
        "seed": {"master_seed": seed.master_seed, "stream_id": seed.stream_id},
        "starts": starts, "haar_inputs": haar_inputs, "tube_n": n_tube, "unitary": unitary,
    })
    for i in range(unitary_samples):
        s = seed.child(i)
        e = ch.make_channel(_unitary(unitary, dim_a, dim_b, s.child(0)), dim_a, dim_b)
        eb = ch.conjugate(e)
        r_e = min_output_entropy(e, starts, s.child(1), threads=threads)
        r_eb = min_output_entropy(eb, starts, s.child(2), threads=threads)
        r_p = min_output_entropy(ch.product_channel(e), starts, s.child(3), threads=threads,
                                 initial=[phi, np.kron(r_e.argmin, r_eb.argmin)])
        hay = hayden_check(e)
        upper = min(r_p.value, hay.entropy)
        gap = r_e.value + r_eb.value - upper

        sigma = e(np.outer(r_e.argmin, np.conj(r_e.argmin)))
        outs = ch.apply_pure(e, haar_states(dim_a, haar_inputs, s.child(4)))
        x_hits = sum(in_X_witnessed(o, params, [sigma]).member for o in outs)
        y_hits = sum(in_Y(o, params) for o in outs)

        report.rows.append({
            "index": i,
            "smin_e": r_e.value,
            "smin_ebar": r_eb.value,
            "product_optimizer": r_p.value,
            "hayden_entropy": hay.entropy,
            "product_upper": upper,
            "gap": gap,
            "theorem_threshold": threshold,
            "hayden_ceiling": hayden_ceiling,
            "hayden_ok": hay.entropy <= hayden_ceiling + HAYDEN_SLACK,
            "upper_le_hayden_ceiling": upper <= hayden_ceiling + HAYDEN_SLACK,
            "subadditive_ok": upper <= r_e.value + r_eb.value + SUBADDITIVITY_SLACK,
            "low_entropy_channel": log_b - r_e.value >= c / dim_b,
            "freq_x": x_hits / haar_inputs,
            "freq_y": y_hits / haar_inputs,
            "converged_starts_e": r_e.converged_starts,
        })

    rows = report.rows
    gaps = np.array([r["gap"] for r in rows])
    low = sum(r["low_entropy_channel"] for r in rows)
    lo, hi = wilson_interval(low, len(rows), DEFAULT_CONFIDENCE)
    report.summary = {
        "gap_min": float(gaps.min()),
        "gap_mean": float(gaps.mean()),
        "gap_max": float(gaps.max()),
        "gaps": gaps.tolist(),
        "theorem_threshold": threshold,
        "violations": int(np.count_nonzero(gaps > SUBADDITIVITY_SLACK)),
        "pr_low_entropy_channel": {"estimate": low / len(rows), "ci_low": lo, "ci_high": hi},
        "mean_freq_x": float(np.mean([r["freq_x"] for r in rows])),
        "mean_freq_y": float(np.mean([r["freq_y"] for r in rows])),
        "c_in_theorem_regime": bool(c >= C0),
    }
    # the product optimizer starts from a product of minimizers, so the
    # upper bound can only exceed the sum through optimizer failure
    report.checks["subadditivity"] = all(r["subadditive_ok"] for r in rows)
    report.checks["upper_le_hayden_ceiling"] = all(r["upper_le_hayden_ceiling"] for r in rows)
    report.summary["hayden_ceiling_violations"] = sum(not r["hayden_ok"] for r in rows)
    report.notes.append(NO_VIOLATION_NOTE)
    if threshold < 0:
        report.notes.append("theorem threshold is negative for this c; the inequality is then implied by subadditivity")
    if csv_path:
        cols = {k: [r[k] for r in rows] for k in rows[0]}
        report.csv_path = write_csv(csv_path, cols)
    report.runtime_seconds = time.perf_counter() - t0
    return report
