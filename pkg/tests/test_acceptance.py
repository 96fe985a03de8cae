"""Acceptance suite: ten criteria at their stated sizes and tolerances.

Each test records one PASS/FAIL line, printed in the terminal summary
(see ``conftest.pytest_terminal_summary``) and also when this file is run
as a script.
"""

import time

import numpy as np
import pytest

from moelab.experiments import (
    counterexample_pipeline,
    verify_bounds,
    verify_FG,
    verify_geometric,
    verify_hayden,
    verify_hhl,
    verify_independence,
    verify_levy,
    verify_lipschitz,
    verify_median_lemma,
    verify_optimizer,
    verify_pinching,
    verify_prop5,
    verify_structural,
)
from moelab.haar import SeedSpec

SEED = SeedSpec(0)
RESULTS: dict[int, str] = {}


def record(n: int, title: str, ok: bool, detail: str, elapsed: float, limit: float | None) -> None:
    within = limit is None or elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    timing = f"{elapsed:.1f}s" + (f" (limit {limit:.0f}s)" if limit else "")
    RESULTS[n] = f"[{status}] {n:>2}. {title}: {detail}; {timing}"
    print(RESULTS[n])
    assert within, f"runtime {elapsed:.1f}s over {limit}s"
    assert ok, detail


def test_01_hayden_ceiling():
    t0 = time.perf_counter()
    bad, overlap_bad, worst = 0, 0, []
    for a, b in [(4, 2), (8, 2), (9, 3)]:
        r = verify_hayden(a, b, 100, SEED.child(a, b))
        bad += r.details["stated_bound_violations"]
        overlap_bad += not r.checks["overlap_ge_1_over_b"]
        worst.append(f"({a},{b}) max S={r.details['max_entropy']:.4f} vs {r.details['stated_bound']:.4f}")
    detail = f"{bad}/300 entropy violations, {overlap_bad} overlap failures; " + ", ".join(worst)
    record(1, "entropy of E⊗Ē on Φ below 2log|B| - log|B|/|B|", bad == 0 and overlap_bad == 0, detail,
           time.perf_counter() - t0, 60)


def test_02_entropy_norm_inequalities():
    t0 = time.perf_counter()
    r = verify_bounds((2, 3, 4, 8), 1000, SEED)
    d = r.details
    detail = (f"gap violations {d['gap_violations']}, s violations {d['s_violations']}, "
              f"r violations {d['r_violations']} over 4000 states")
    ok = r.checks["two_norm_entropy_gap"] and r.checks["entropy_le_s"] and r.checks["purity_ge_r"]
    record(2, "two-norm/entropy gap and top-eigenvalue bounds", ok, detail, time.perf_counter() - t0, 60)


def test_03_polar_cap():
    t0 = time.perf_counter()
    parts, ok = [], True
    for a in (2, 3, 4):
        r = verify_geometric(a, 100_000, SEED)
        ok &= r.checks["exact_in_ci"] and r.checks["exact_ge_bound"]
        parts.append(f"|A|={a} est {r.estimate:.4f} in [{r.ci_low:.4f},{r.ci_high:.4f}] exact {r.details['exact']:.4f}")
    record(3, "polar-cap probability", ok, "; ".join(parts), time.perf_counter() - t0, 60)


def test_04_median_lemma():
    t0 = time.perf_counter()
    parts, ok = [], True
    for a, b in [(4, 2), (16, 2), (9, 3)]:
        r = verify_median_lemma(a, b, 10_000, SEED.child(a, b))
        ok &= r.passed
        parts.append(f"({a},{b}) z={r.details['z_score']:+.2f} median {r.details['median']:.3f}"
                     f"<={r.details['median_bound']:.3f}")
    record(4, "median of g and exact E g^2", ok, "; ".join(parts), time.perf_counter() - t0, 120)


def test_05_prop5():
    t0 = time.perf_counter()
    parts, ok = [], True
    for eps in (0.2, 0.3, 0.4):
        r = verify_prop5(64, 2, 3.0, eps, 10_000, SEED)
        ok &= r.bound_satisfied
        parts.append(f"eps={eps} ci_low {r.ci_low:.4f} <= min(1,{r.analytic_bound:.3g})")
    record(5, "large-deviation bound for g on Y", ok, "; ".join(parts), time.perf_counter() - t0, 180)


def test_06_hhl_and_levy():
    t0 = time.perf_counter()
    parts, ok = [], True
    for a in (16, 32, 64):
        h = verify_hhl(a, 2, 0.5, 10_000, SEED.child(a))
        lv = verify_levy(a, 0.3, 10_000, SEED.child(a))
        ok &= h.passed and lv.passed
        parts.append(f"|A|={a} hhl {h.estimate:.4f} levy {lv.estimate:.4f} (exact {lv.details['exact']:.4f})")
    record(6, "operator-norm and Levy tails", ok, "; ".join(parts), time.perf_counter() - t0, 180)


def test_07_lipschitz_and_pinching():
    t0 = time.perf_counter()
    lip = verify_lipschitz(16, 2, 3.0, 1000, SEED)
    pin = verify_pinching(1000, SEED)
    ok = lip.passed and pin.passed and lip.details["qualifying_pairs"] > 0
    detail = (f"{lip.details['restricted_violations']} Lipschitz violations over {lip.details['qualifying_pairs']} pairs "
              f"(max ratio {lip.details['max_ratio']:.3f}); {pin.details['frobenius_violations'] + pin.details['operator_violations']} "
              f"pinching violations over 1000 draws")
    record(7, "restricted Lipschitz bound and pinching", ok, detail, time.perf_counter() - t0, 120)


def test_08_optimizer_oracle():
    t0 = time.perf_counter()
    r = verify_optimizer(2, 2, 20, SEED, gradient_points=100)
    detail = (f"max |opt - oracle| {r.details['max_abs_diff']:.2e}, "
              f"max gradient rel error {r.details['max_gradient_rel_error']:.2e}")
    record(8, "optimizer vs brute-force oracle", r.passed, detail, time.perf_counter() - t0, 300)


def test_09_structural():
    t0 = time.perf_counter()
    r = verify_structural(4, 2, 50, SEED)
    detail = ", ".join(f"{k} {v:.1e}" for k, v in r.details["max_residuals"].items())
    record(9, "structural identities", r.passed, detail, time.perf_counter() - t0, 60)


def _numbers(report):
    d = report.to_dict()
    d.pop("runtime_seconds", None)
    return d


RUNS = {
    "geometric": lambda th: verify_geometric(3, 3000, SEED, threads=th, block_size=256),
    "median": lambda th: verify_median_lemma(4, 2, 3000, SEED, threads=th, block_size=256),
    "prop5": lambda th: verify_prop5(16, 2, 3.0, 0.6, 3000, SEED, threads=th, block_size=256),
    "hhl": lambda th: verify_hhl(16, 2, 0.5, 3000, SEED, threads=th, block_size=256),
    "levy": lambda th: verify_levy(8, 0.3, 3000, SEED, threads=th, block_size=256),
    "fg": lambda th: verify_FG(8, 2, 1000, SEED, threads=th, block_size=128),
    "independence": lambda th: verify_independence(6, 3000, SEED, threads=th, block_size=256),
    "hayden": lambda th: verify_hayden(4, 2, 40, SEED, threads=th),
    "lipschitz": lambda th: verify_lipschitz(16, 2, 3.0, 600, SEED, threads=th, block_size=128),
    "pinching": lambda th: verify_pinching(300, SEED, threads=th, block_size=64),
    "structural": lambda th: verify_structural(3, 2, 40, SEED, threads=th),
    "pipeline": lambda th: counterexample_pipeline(2, 2, 1.0, 3.0, 2, SEED, starts=6, haar_inputs=10, threads=th),
}


def test_10_determinism():
    t0 = time.perf_counter()
    differing = [name for name, run in RUNS.items() if _numbers(run(1)) != _numbers(run(4))]
    detail = f"{len(RUNS) - len(differing)}/{len(RUNS)} suites bit-identical at threads 1 vs 4"
    if differing:
        detail += f"; differing: {', '.join(differing)}"
    record(10, "determinism across thread counts", not differing, detail, time.perf_counter() - t0, None)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
