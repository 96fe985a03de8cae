"""Named verification suites.

Each suite samples with the block engine and returns an
:class:`ExperimentReport`. ``checks`` holds the assertions the suite
stands behind; bounds that are vacuous at the chosen size are reported
with a warning instead of being counted as evidence.
"""

from __future__ import annotations

import time

import numpy as np
from scipy import stats

from .. import channel as ch
from ..entropy import bound_r, bound_s, hayden_check, von_neumann
from ..geometry import SetParams, g_function, lipschitz_pair_check, pinch
from ..haar import (
    SeedSpec,
    complex_gaussian,
    haar_isometries,
    haar_state,
    haar_state_orthogonal,
    haar_states,
    haar_states_orthogonal,
    haar_unitary,
)
from ..linalg import (
    clamped_eigvalsh,
    hermitian_operator_norm,
    max_entangled,
    maximally_mixed,
    norm,
    reduced_from_vector,
    swap_operator,
)
from ..minent import brute_force_min_entropy, min_output_entropy, output_entropy, output_entropy_gradient
from .engine import (
    DEFAULT_CONFIDENCE,
    ExperimentConfig,
    ExperimentReport,
    fixed_generator,
    intersection_bound_holds,
    probability_report,
    run_trials,
    write_csv,
)

LN2 = np.log(2.0)
CROSSCHECK_CONFIDENCE = 0.999
VIOLATION_TOL = 1e-9


def _config(dim_a, dim_b, trials, seed, *, threads=1, confidence_level=DEFAULT_CONFIDENCE,
            block_size=None, csv_path=None, params=None) -> ExperimentConfig:
    kw = {} if block_size is None else {"block_size": block_size}
    return ExperimentConfig(dim_a, dim_b, trials, seed, params, confidence_level, threads, csv_path=csv_path, **kw)


def _run(cfg: ExperimentConfig, sampler, block_size=None):
    return run_trials(sampler, cfg.trials, cfg.seed, threads=cfg.threads,
                      block_size=block_size or cfg.block_size)


def _finish(report: ExperimentReport, cfg: ExperimentConfig, cols: dict, t0: float) -> ExperimentReport:
    if cfg.csv_path:
        report.csv_path = write_csv(cfg.csv_path, cols)
    report.runtime_seconds = time.perf_counter() - t0
    return report


def _violation_report(name, cfg, violations, t0, cols, **details) -> ExperimentReport:
    """Report for universal inequalities: estimate is the violation rate."""
    rep = probability_report(name, cfg.echo(), violations, confidence=cfg.confidence_level)
    rep.details.update(details)
    return _finish(rep, cfg, cols, t0)


def overlap_tail(dim: int, t: float) -> float:
    """``Pr(|<psi|chi>|^2 >= t)`` for Haar ``chi`` in C^dim: ``(1-t)^(dim-1)``."""
    if t <= 0:
        return 1.0
    if t >= 1:
        return 1.0 if dim == 1 and t == 1 else 0.0
    return float((1.0 - t) ** (dim - 1))


# --- polar cap -------------------------------------------------------------

def geometric_lower_bound(dim_a: int) -> float:
    return float(2.0 ** (-dim_a) / (8 * dim_a))


def verify_geometric(dim_a: int, trials: int, seed: SeedSpec, **opts) -> ExperimentReport:
    """Overlap event ``|<psi|chi>|^2 >= 1/2`` for fixed ``psi``, Haar ``chi``."""
    if dim_a > 24:
        raise ValueError("dim_a > 24 makes the event unobservably rare")
    t0 = time.perf_counter()
    cfg = _config(dim_a, 1, trials, seed, **opts)
    psi = haar_state(dim_a, fixed_generator(seed))

    def sampler(rng, n):
        chi = haar_states(dim_a, n, rng)
        return {"x": np.abs(chi @ np.conj(psi)) ** 2}

    cols = _run(cfg, sampler)
    exact = 2.0 ** (-(dim_a - 1))
    lower = geometric_lower_bound(dim_a)
    n_real = 2 * dim_a
    rep = probability_report("geometric", cfg.echo(), cols["x"] >= 0.5,
                             confidence=cfg.confidence_level, bound=lower, bound_kind="lower")
    rep.details.update(exact=exact, cap_volume_bound=1.0 / (n_real * np.pi * np.sqrt(2.0) ** (n_real - 1)))
    rep.checks["exact_in_ci"] = rep.ci_low <= exact <= rep.ci_high
    rep.checks["exact_ge_bound"] = exact >= lower
    return _finish(rep, cfg, cols, t0)


# --- median lemma ----------------------------------------------------------

def g_second_moment(dim_a: int, dim_b: int) -> float:
    """``E g^2 = (|A|+|B|)/(|A||B|+1) - 1/|B|`` over Haar states on ``A ⊗ B``."""
    return (dim_a + dim_b) / (dim_a * dim_b + 1) - 1.0 / dim_b


def verify_median_lemma(dim_a: int, dim_b: int, trials: int, seed: SeedSpec, **opts) -> ExperimentReport:
    """Median of ``g`` against ``2/sqrt|A|`` and the exact mean of ``g^2``.

    The reported estimate is ``Pr(g <= 2/sqrt|A|)``; the median bound holds
    exactly when that probability is at least one half.
    """
    t0 = time.perf_counter()
    cfg = _config(dim_a, dim_b, trials, seed, **opts)

    def sampler(rng, n):
        return {"g": g_function(haar_states(dim_a * dim_b, n, rng), dim_a, dim_b)}

    cols = _run(cfg, sampler)
    g = cols["g"]
    median_bound = 2.0 / np.sqrt(dim_a)
    g2 = g**2
    mean, se = float(np.mean(g2)), float(np.std(g2, ddof=1) / np.sqrt(g2.size))
    exact = g_second_moment(dim_a, dim_b)
    rep = probability_report("median", cfg.echo(), g <= median_bound, confidence=cfg.confidence_level)
    rep.details.update(median=float(np.median(g)), median_bound=median_bound,
                       mean_g2=mean, se_g2=se, exact_mean_g2=exact, z_score=(mean - exact) / se)
    rep.checks["median_le_bound"] = float(np.median(g)) <= median_bound
    rep.checks["mean_g2_within_4se"] = abs(mean - exact) <= 4 * se
    return _finish(rep, cfg, cols, t0)


# --- large deviation bound for g on Y ----------------------------------------

def prop5_bound(dim_a: int, dim_b: int, a: float, epsilon: float) -> float:
    return float(4.0 * np.exp(-dim_a * dim_b**2 * (epsilon - 2.0 / np.sqrt(dim_a)) ** 2 / (64.0 * a)))


def verify_prop5(dim_a: int, dim_b: int, a: float, epsilon: float, trials: int, seed: SeedSpec,
                 **opts) -> ExperimentReport:
    """``Pr(g >= eps and psi_B in Y_{|B|,a})`` against its exponential bound."""
    if dim_a < dim_b**2:
        raise ValueError("the bound needs |A| >= |B|^2")
    if a < 3:
        raise ValueError("the bound needs a >= 3")
    t0 = time.perf_counter()
    cfg = _config(dim_a, dim_b, trials, seed, params=SetParams(dim_b, dim_a, 1.0, a), **opts)

    def sampler(rng, n):
        rho = reduced_from_vector(haar_states(dim_a * dim_b, n, rng), dim_a, dim_b)
        return {"g": norm(rho - maximally_mixed(dim_b), "frobenius"),
                "opnorm": hermitian_operator_norm(rho)}

    cols = _run(cfg, sampler)
    bound = prop5_bound(dim_a, dim_b, a, epsilon)
    hits = (cols["g"] >= epsilon) & (cols["opnorm"] <= a / dim_b + 1e-10)
    rep = probability_report("prop5", cfg.echo() | {"a": a, "epsilon": epsilon}, hits,
                             confidence=cfg.confidence_level, bound=bound, bound_kind="upper")
    rep.checks["bound"] = rep.bound_satisfied
    if epsilon <= 2.0 / np.sqrt(dim_a):
        rep.warnings.append("epsilon <= 2/sqrt|A|: outside the regime where the bound is derived")
    rep.details["g_max_possible"] = float(np.sqrt(1.0 - 1.0 / dim_b))
    return _finish(rep, cfg, cols, t0)


# --- operator norm tail ------------------------------------------------------

def hhl_bounds(dim_a: int, dim_b: int, epsilon: float) -> dict:
    """Both operator-norm tail bounds; the first only applies for eps < 1."""
    pre = (10.0 * dim_b / epsilon) ** (2 * dim_b)
    out = {"general": float(pre * np.exp(-dim_a * (epsilon - np.log1p(epsilon)) / (14 * LN2)))}
    if epsilon < 1:
        out["small_eps"] = float(pre * np.exp(-dim_a * epsilon**2 / (14 * LN2)))
    return out


def verify_hhl(dim_a: int, dim_b: int, epsilon: float, trials: int, seed: SeedSpec, **opts) -> ExperimentReport:
    """``Pr(||psi_B||_inf >= (1+eps)/|B|)`` against both tail bounds."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    t0 = time.perf_counter()
    cfg = _config(dim_a, dim_b, trials, seed, **opts)

    def sampler(rng, n):
        rho = reduced_from_vector(haar_states(dim_a * dim_b, n, rng), dim_a, dim_b)
        return {"opnorm": hermitian_operator_norm(rho)}

    cols = _run(cfg, sampler)
    bounds = hhl_bounds(dim_a, dim_b, epsilon)
    best = min(bounds.values())
    rep = probability_report("hhl", cfg.echo() | {"epsilon": epsilon}, cols["opnorm"] >= (1 + epsilon) / dim_b,
                             confidence=cfg.confidence_level, bound=best, bound_kind="upper")
    rep.details["bounds"] = bounds
    for k, b in bounds.items():
        rep.checks[f"bound_{k}"] = rep.ci_low <= min(1.0, b)
    return _finish(rep, cfg, cols, t0)


# --- Levy concentration for the overlap statistic ----------------------------

def levy_bound(dim: int, alpha: float) -> float:
    return float(4.0 * np.exp(-dim * alpha**2 / 16.0))


def verify_levy(dim: int, alpha: float, trials: int, seed: SeedSpec,
                statistic: str = "overlap_with_fixed_vector", **opts) -> ExperimentReport:
    """Tail of ``f(phi) = |<theta|phi>|`` above ``1/sqrt(dim) + alpha``.

    Besides the one-sided bound check, the empirical tail is cross-checked
    against the exact law ``(1 - t)^(dim - 1)`` using a 99.9% Wilson
    interval.
    """
    if statistic != "overlap_with_fixed_vector":
        raise ValueError(f"unsupported statistic {statistic!r}")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    t0 = time.perf_counter()
    cfg = _config(dim, 1, trials, seed, **opts)
    theta = haar_state(dim, fixed_generator(seed))

    def sampler(rng, n):
        return {"f": np.abs(haar_states(dim, n, rng) @ np.conj(theta))}

    cols = _run(cfg, sampler)
    level = 1.0 / np.sqrt(dim) + alpha
    bound = levy_bound(dim, alpha)
    exact = overlap_tail(dim, level**2)
    hits = cols["f"] >= level
    rep = probability_report("levy", cfg.echo() | {"alpha": alpha}, hits,
                             confidence=cfg.confidence_level, bound=bound, bound_kind="upper")
    wide = probability_report("levy", {}, hits, confidence=CROSSCHECK_CONFIDENCE)
    rep.details.update(exact=exact, threshold=level, crosscheck_ci=[wide.ci_low, wide.ci_high])
    rep.checks["bound"] = rep.bound_satisfied
    rep.checks["exact_le_bound"] = exact <= min(1.0, bound)
    rep.checks["exact_in_crosscheck_ci"] = wide.ci_low <= exact <= wide.ci_high
    return _finish(rep, cfg, cols, t0)


# --- events F and G ----------------------------------------------------------

def verify_FG(dim_a: int, dim_b: int, trials: int, seed: SeedSpec, *, a: float = 15.0, c: float = 1.0,
              **opts) -> ExperimentReport:
    """Frequencies of the cross-term event F and the flatness event G.

    Per trial a Haar channel, a fixed ``psi`` and a Haar ``phi ⟂ psi`` are
    drawn. The analytic lower bounds on Pr(F), Pr(G) carry unspecified
    constants and need ``log|A| >= 8|B|^8``; only their explicit pieces are
    reported, and nothing about them is asserted.
    """
    if dim_a < 2:
        raise ValueError("dim_a must be at least 2")
    t0 = time.perf_counter()
    cfg = _config(dim_a, dim_b, trials, seed, params=SetParams(dim_b, dim_a, c, a), **opts)
    psi = haar_state(dim_a, fixed_generator(seed))
    width = np.sqrt(np.log2(dim_a) / dim_a)

    def sampler(rng, n):
        v = haar_isometries(dim_a * dim_b, dim_a, n, rng)
        phi = haar_states_orthogonal(psi, n, rng)
        m_psi = np.einsum("nij,j->ni", v, psi).reshape(n, dim_a, dim_b)
        m_phi = np.einsum("nij,nj->ni", v, phi).reshape(n, dim_a, dim_b)
        cross = np.einsum("nab,nac->nbc", m_psi, np.conj(m_phi))
        out_phi = np.einsum("nab,nac->nbc", m_phi, np.conj(m_phi))
        cross_norm = np.linalg.svd(cross, compute_uv=False)[:, 0]
        flat = hermitian_operator_norm(out_phi - maximally_mixed(dim_b))
        dev = np.log2(dim_b) - von_neumann(out_phi) if dim_b > 1 else np.zeros(n)
        return {
            "cross_norm": cross_norm,
            "flat_dev": flat,
            "F": cross_norm <= 0.25 * width,
            "G": flat <= 0.5 * width,
            "Y": hermitian_operator_norm(out_phi) <= a / dim_b + 1e-10,
            "lowdev": dev >= c / dim_b,
        }

    cols = _run(cfg, sampler)
    both = cols["F"] & cols["G"]
    rep = probability_report("fg", cfg.echo(), both, confidence=cfg.confidence_level)
    events = {k: cols[k] for k in ("F", "G", "Y", "lowdev")}
    for k, v in events.items():
        sub = probability_report(k, {}, v, confidence=cfg.confidence_level)
        rep.details[f"pr_{k}"] = {"estimate": sub.estimate, "ci_low": sub.ci_low, "ci_high": sub.ci_high}
    rep.details.update(
        width=float(width),
        regime_ok=bool(np.log2(dim_a) >= 8 * dim_b**8),
        note="lower bounds on Pr(F), Pr(G) involve unspecified constants; reported frequencies only",
    )
    rep.checks["intersection_algebra"] = all(
        intersection_bound_holds(events[m], events[n]) for m in events for n in events
    )
    if dim_b == 1:
        rep.checks["G_always_for_dim_b_1"] = bool(np.all(cols["G"]))
    return _finish(rep, cfg, cols, t0)


# --- independence of the decomposition -------------------------------------

def verify_independence(dim_a: int, trials: int, seed: SeedSpec, **opts) -> ExperimentReport:
    """Correlation of ``x = |<psi|chi>|^2`` with ``|<theta|phi>|^2``.

    Also tests the marginal of ``x`` against Beta(1, |A|-1) with a KS test.
    The estimate is the Pearson correlation with a Fisher-z interval.
    """
    if dim_a < 2:
        raise ValueError("dim_a must be at least 2")
    t0 = time.perf_counter()
    cfg = _config(dim_a, 1, trials, seed, **opts)
    psi = haar_state(dim_a, fixed_generator(seed, 0))
    theta = haar_state_orthogonal(psi, fixed_generator(seed, 1))

    def sampler(rng, n):
        chi = haar_states(dim_a, n, rng)
        ov = chi @ np.conj(psi)
        rest = chi - ov[:, None] * psi[None, :]
        phi = rest / np.linalg.norm(rest, axis=1, keepdims=True)
        return {"x": np.abs(ov) ** 2, "stat": np.abs(phi @ np.conj(theta)) ** 2}

    cols = _run(cfg, sampler)
    x, s = cols["x"], cols["stat"]
    n = x.size
    ks = stats.kstest(x, stats.beta(1, dim_a - 1).cdf)
    degenerate = bool(np.ptp(s) < 1e-12)
    if degenerate:
        r, lo, hi = 0.0, 0.0, 0.0
    else:
        r = float(np.corrcoef(x, s)[0, 1])
        zc = stats.norm.ppf(0.5 + cfg.confidence_level / 2) / np.sqrt(n - 3)
        lo, hi = float(np.tanh(np.arctanh(r) - zc)), float(np.tanh(np.arctanh(r) + zc))
    rep = ExperimentReport("independence", cfg.echo(), r, lo, hi)
    rep.details.update(ks_pvalue=float(ks.pvalue), ks_statistic=float(ks.statistic), degenerate=degenerate)
    if degenerate:
        rep.warnings.append("statistic is constant (|A| = 2): correlation undefined")
    else:
        rep.checks["correlation_within_3_over_sqrt_n"] = abs(r) <= 3.0 / np.sqrt(n)
    rep.checks["ks_beta_marginal"] = ks.pvalue > 0.01
    return _finish(rep, cfg, cols, t0)


# --- universal inequalities --------------------------------------------------

def verify_hayden(dim_a: int, dim_b: int, samples: int, seed: SeedSpec, **opts) -> ExperimentReport:
    """Maximally entangled input through ``E ⊗ Ē`` for Haar channels.

    The estimate is the rate at which the stated ceiling
    ``2 log2|B| - log2|B|/|B|`` is exceeded.
    """
    t0 = time.perf_counter()
    cfg = _config(dim_a, dim_b, samples, seed, **opts)

    def sampler(rng, n):
        ent, ov = np.empty(n), np.empty(n)
        for i, v in enumerate(haar_isometries(dim_a * dim_b, dim_a, n, rng)):
            res = hayden_check(ch.from_isometry(v, dim_a, dim_b))
            ent[i], ov[i] = res.entropy, res.overlap
        return {"entropy": ent, "overlap": ov}

    cols = _run(cfg, sampler, block_size=16)
    ref = hayden_check(ch.make_channel(ch.identity_unitary(dim_a, dim_b), dim_a, dim_b))
    stated, corrected = ref.bound, ref.corrected_bound
    over = cols["entropy"] > stated + 1e-8
    rep = probability_report("hayden", cfg.echo(), over, confidence=cfg.confidence_level)
    rep.analytic_bound = stated
    rep.details.update(
        stated_bound=stated,
        corrected_bound=corrected,
        max_entropy=float(np.max(cols["entropy"])),
        min_overlap=float(np.min(cols["overlap"])),
        stated_bound_violations=int(np.count_nonzero(over)),
        corrected_bound_violations=int(np.count_nonzero(cols["entropy"] > corrected + 1e-8)),
    )
    rep.checks["overlap_ge_1_over_b"] = bool(np.all(cols["overlap"] >= 1.0 / dim_b - 1e-9))
    rep.checks["entropy_le_stated_bound"] = not bool(np.any(over))
    rep.checks["entropy_le_corrected_bound"] = rep.details["corrected_bound_violations"] == 0
    if np.any(over):
        rep.warnings.append(
            "stated ceiling exceeded; the top-eigenvalue argument only yields "
            f"s(1/|B|, |B|^2) = {corrected:.6f}"
        )
    return _finish(rep, cfg, cols, t0)


def random_density_matrices(dim: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Density matrices of random rank 1..dim (induced Ginibre measure)."""
    out = np.empty((n, dim, dim), dtype=complex)
    ranks = rng.integers(1, dim + 1, size=n)
    for i, k in enumerate(ranks):
        g = complex_gaussian(rng, (dim, int(k)))
        rho = g @ g.conj().T
        out[i] = rho / np.trace(rho).real
    return out


def verify_bounds(dims=(2, 3, 4, 8), samples: int = 1000, seed: SeedSpec = SeedSpec(), **opts) -> ExperimentReport:
    """Entropy/norm inequalities on random states.

    * ``||rho - I/D||_2^2 >= (log2 D - S(rho)) / D``, checked as stated in
      bits and again in nats, where it is a theorem
    * ``S(rho) <= s(lambda, D)`` and ``tr(rho^2) >= r(lambda, D)`` with
      ``lambda = ||rho||_inf``.
    """
    t0 = time.perf_counter()
    cfg = _config(max(dims), 1, samples * len(dims), seed, **opts)
    cols: dict[str, list] = {"D": [], "entropy": [], "lam": [], "purity": [], "gap_lhs": [], "gap_rhs": [],
                             "s_bound": [], "r_bound": []}
    for j, d in enumerate(dims):
        rng = seed.child(0, j).generator()
        rhos = random_density_matrices(d, samples, rng)
        w = clamped_eigvalsh(rhos)
        ent = von_neumann(rhos)
        lam = w[:, -1]
        purity = np.sum(w**2, axis=1)
        lhs = norm(rhos - maximally_mixed(d), "frobenius") ** 2
        rhs = (np.log2(d) - ent) / d
        s_b = np.array([bound_s(min(l, 1.0), d) if l > 1.0 / d else np.log2(d) for l in lam])
        r_b = np.array([bound_r(min(max(l, 1.0 / d), 1.0), d) for l in lam])
        for k, v in (("D", np.full(samples, d)), ("entropy", ent), ("lam", lam), ("purity", purity),
                     ("gap_lhs", lhs), ("gap_rhs", rhs), ("s_bound", s_b), ("r_bound", r_b)):
            cols[k].append(v)
    arr = {k: np.concatenate(v) for k, v in cols.items()}
    v_gap = arr["gap_lhs"] < arr["gap_rhs"] - VIOLATION_TOL
    v_gap_nats = arr["gap_lhs"] < LN2 * arr["gap_rhs"] - VIOLATION_TOL
    v_s = arr["entropy"] > arr["s_bound"] + VIOLATION_TOL
    v_r = arr["purity"] < arr["r_bound"] - VIOLATION_TOL
    rep = _violation_report("bounds", cfg, v_gap | v_s | v_r, t0, arr,
                            dims=list(dims), gap_violations=int(v_gap.sum()),
                            gap_violations_nats=int(v_gap_nats.sum()),
                            s_violations=int(v_s.sum()), r_violations=int(v_r.sum()))
    rep.checks["two_norm_entropy_gap"] = not v_gap.any()
    rep.checks["two_norm_entropy_gap_nats"] = not v_gap_nats.any()
    if v_gap.any():
        rep.warnings.append("entropy-gap inequality fails in bits; it holds in nats (ln x <= x - 1)")
    rep.checks["entropy_le_s"] = not v_s.any()
    rep.checks["purity_ge_r"] = not v_r.any()
    return rep


def verify_lipschitz(dim_a: int = 16, dim_b: int = 2, a: float = 3.0, pairs: int = 1000,
                     seed: SeedSpec = SeedSpec(), **opts) -> ExperimentReport:
    """Restricted Lipschitz bound for ``g`` on pairs with reductions in Y.

    Half of the pairs are independent Haar draws, half are small
    perturbations at log-uniform distances, where the constant is tight.
    """
    t0 = time.perf_counter()
    cfg = _config(dim_a, dim_b, pairs, seed, params=SetParams(dim_b, dim_a, 1.0, a), **opts)
    d = dim_a * dim_b

    def sampler(rng, n):
        psi = haar_states(d, n, rng)
        far = haar_states(d, n, rng)
        scale = 10.0 ** rng.uniform(-4, 0.3, size=n)
        near = psi + scale[:, None] * complex_gaussian(rng, (n, d)) / np.sqrt(d)
        near /= np.linalg.norm(near, axis=1, keepdims=True)
        phi = np.where((np.arange(n) % 2 == 0)[:, None], far, near)
        keep = (hermitian_operator_norm(reduced_from_vector(psi, dim_a, dim_b)) <= a / dim_b) & \
               (hermitian_operator_norm(reduced_from_vector(phi, dim_a, dim_b)) <= a / dim_b)
        lhs, rhs, dist = np.zeros(n), np.zeros(n), np.linalg.norm(psi - phi, axis=1)
        for i in np.flatnonzero(keep):
            lhs[i], rhs[i] = lipschitz_pair_check(psi[i], phi[i], dim_a, dim_b, a)
        return {"in_y": keep, "lhs": lhs, "rhs": rhs, "dist": dist}

    cols = _run(cfg, sampler)
    keep = cols["in_y"]
    restricted = keep & (cols["lhs"] > cols["rhs"] + VIOLATION_TOL)
    g_all = np.abs(cols["lhs"])
    global_v = keep & (g_all > 2 * cols["dist"] + VIOLATION_TOL)
    rep = _violation_report("lipschitz", cfg, restricted, t0, cols,
                            qualifying_pairs=int(keep.sum()), restricted_violations=int(restricted.sum()),
                            global_violations=int(global_v.sum()),
                            max_ratio=float(np.max(cols["lhs"][keep] / cols["rhs"][keep], initial=0.0)))
    rep.checks["restricted_lipschitz"] = not restricted.any()
    rep.checks["global_2_lipschitz"] = not global_v.any()
    return rep


def random_projector_family(dim: int, rng: np.random.Generator) -> list[np.ndarray]:
    w = np.linalg.qr(complex_gaussian(rng, (dim, dim)))[0]
    cuts = np.sort(rng.choice(np.arange(1, dim), size=rng.integers(0, dim), replace=False)) if dim > 1 else []
    blocks = np.split(np.arange(dim), cuts)
    return [w[:, b] @ w[:, b].conj().T for b in blocks]


def verify_pinching(draws: int = 1000, seed: SeedSpec = SeedSpec(), max_dim: int = 8, **opts) -> ExperimentReport:
    """Pinching never increases the Frobenius or operator norm."""
    t0 = time.perf_counter()
    cfg = _config(max_dim, 1, draws, seed, **opts)

    def sampler(rng, n):
        out = {k: np.zeros(n) for k in ("x2", "p2", "xinf", "pinf", "trace_err")}
        for i in range(n):
            d = int(rng.integers(2, max_dim + 1))
            x = complex_gaussian(rng, (d, d))
            px = pinch(x, random_projector_family(d, rng))
            out["x2"][i], out["p2"][i] = norm(x, "frobenius"), norm(px, "frobenius")
            out["xinf"][i], out["pinf"][i] = norm(x, "operator"), norm(px, "operator")
            out["trace_err"][i] = abs(np.trace(px) - np.trace(x))
        return out

    cols = _run(cfg, sampler)
    v2 = cols["p2"] > cols["x2"] + 1e-10
    vinf = cols["pinf"] > cols["xinf"] + 1e-10
    rep = _violation_report("pinching", cfg, v2 | vinf, t0, cols,
                            frobenius_violations=int(v2.sum()), operator_violations=int(vinf.sum()),
                            max_trace_error=float(cols["trace_err"].max()))
    rep.checks["frobenius_contracts"] = not v2.any()
    rep.checks["operator_contracts"] = not vinf.any()
    rep.checks["trace_preserved"] = bool(cols["trace_err"].max() <= 1e-10)
    return rep


def verify_structural(dim_a: int = 4, dim_b: int = 2, samples: int = 50, seed: SeedSpec = SeedSpec(),
                      **opts) -> ExperimentReport:
    """Kraus, conjugation, complementary and swap-trick identities."""
    t0 = time.perf_counter()
    cfg = _config(dim_a, dim_b, samples, seed, **opts)

    def sampler(rng, n):
        out = {k: np.zeros(n) for k in ("completeness", "reconstruct", "conj", "compl_entropy", "swap")}
        for i in range(n):
            e = ch.make_channel(haar_unitary(dim_a * dim_b, rng), dim_a, dim_b)
            rho = random_density_matrices(dim_a, 1, rng)[0]
            psi = haar_states(dim_a, 1, rng)[0]
            k = ch.kraus_of_complementary(e)
            out["completeness"][i] = np.max(np.abs(np.einsum("kji,kjl->il", np.conj(k), k) - np.eye(dim_a)))
            out["reconstruct"][i] = np.max(np.abs(ch.reconstruct_direct_from_kraus(k, rho) - ch.apply(e, rho)))
            out["conj"][i] = np.max(np.abs(ch.apply(ch.conjugate(e), rho) - np.conj(ch.apply(e, np.conj(rho)))))
            pure = np.outer(psi, np.conj(psi))
            out["compl_entropy"][i] = abs(von_neumann(ch.apply(e, pure)) - von_neumann(ch.apply(ch.complementary(e), pure)))
            sig = random_density_matrices(dim_b, 1, rng)[0]
            out["swap"][i] = abs(np.trace(np.kron(sig, sig) @ swap_operator(dim_b)) - np.trace(sig @ sig))
        return out

    cols = _run(cfg, sampler, block_size=16)
    limits = {"completeness": 1e-8, "reconstruct": 1e-8, "conj": 1e-10, "compl_entropy": 1e-8, "swap": 1e-10}
    bad = np.zeros(samples, dtype=bool)
    rep_checks = {}
    for k, lim in limits.items():
        rep_checks[k] = bool(cols[k].max() <= lim)
        bad |= cols[k] > lim
    rep = _violation_report("structural", cfg, bad, t0, cols,
                            max_residuals={k: float(cols[k].max()) for k in limits}, limits=limits)
    rep.checks.update(rep_checks)
    return rep


def finite_difference_gradient(channel, psi: np.ndarray, step: float = 1e-5) -> np.ndarray:
    g = np.zeros(psi.shape[0], dtype=complex)
    for j in range(psi.shape[0]):
        for unit in (1.0, 1j):
            e = np.zeros_like(psi)
            e[j] = unit
            d = (output_entropy(channel, psi + step * e) - output_entropy(channel, psi - step * e)) / (2 * step)
            g[j] += d * unit
    return g


def verify_optimizer(dim_a: int = 2, dim_b: int = 2, samples: int = 20, seed: SeedSpec = SeedSpec(), *,
                     starts: int = 50, grid_points: int = 10_000, gradient_points: int = 100,
                     tol: float = 5e-4, **opts) -> ExperimentReport:
    """Optimizer against the brute-force oracle, and gradient against finite differences."""
    t0 = time.perf_counter()
    cfg = _config(dim_a, dim_b, samples, seed, **opts)

    def sampler(rng, n):
        opt, orc, nconv = np.zeros(n), np.zeros(n), np.zeros(n, dtype=int)
        for i in range(n):
            e = ch.make_channel(haar_unitary(dim_a * dim_b, rng), dim_a, dim_b)
            s1, s2 = rng.integers(0, 2**63, size=2)
            res = min_output_entropy(e, starts, SeedSpec(int(s1)))
            opt[i], nconv[i] = res.value, res.converged_starts
            orc[i] = brute_force_min_entropy(e, grid_points, SeedSpec(int(s2)))
        return {"optimizer": opt, "oracle": orc, "converged_starts": nconv}

    cols = _run(cfg, sampler, block_size=1)
    diff = np.abs(cols["optimizer"] - cols["oracle"])

    grad_rng = fixed_generator(seed)
    rel = np.zeros(gradient_points)
    for i in range(gradient_points):
        e = ch.make_channel(haar_unitary(dim_a * dim_b, grad_rng), dim_a, dim_b)
        psi = haar_states(dim_a, 1, grad_rng)[0]
        g = output_entropy_gradient(e, psi)
        rel[i] = np.linalg.norm(finite_difference_gradient(e, psi) - g) / np.linalg.norm(g)

    rep = _violation_report("optimizer", cfg, diff > tol, t0, cols,
                            max_abs_diff=float(diff.max()), max_gradient_rel_error=float(rel.max()),
                            optimizer_exceeds_oracle=int(np.count_nonzero(cols["optimizer"] > cols["oracle"] + tol)))
    rep.checks["optimizer_matches_oracle"] = bool(diff.max() <= tol)
    rep.checks["gradient_matches_fd"] = bool(rel.max() <= 1e-5)
    return rep
