"""Minimum output entropy estimation.

``min_output_entropy`` runs multi-start Riemannian gradient descent on the
unit sphere of pure inputs (pure inputs suffice because entropy is
concave). ``brute_force_min_entropy`` is an independent, derivative-free
oracle: dense Haar sampling followed by a coordinate pattern search.

Both accept any channel-like object exposing ``kraus`` (a ``(k, out, in)``
stack) and ``input_dim``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .entropy import von_neumann
from .haar import SeedLike, as_generator, haar_states

LN2 = np.log(2.0)
MAX_ITER = 200
GRAD_TOL = 1e-7
ARMIJO_C = 1e-4
DEFAULT_STARTS = 50
ORACLE_MAX_DIM = 4
_EIG_FLOOR = 1e-300


@dataclass
class MinEntResult:
    value: float
    argmin: np.ndarray = field(repr=False)
    starts: int
    converged_starts: int
    best_gradient_norm: float

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "argmin": [[float(z.real), float(z.imag)] for z in self.argmin],
            "starts": self.starts,
            "converged_starts": self.converged_starts,
            "best_gradient_norm": self.best_gradient_norm,
        }


def _outputs(kraus: np.ndarray, psi: np.ndarray) -> np.ndarray:
    m = np.einsum("kij,...j->...ki", kraus, psi)
    return np.einsum("...ki,...kj->...ij", m, np.conj(m))


def output_entropy(channel, psi: np.ndarray) -> float:
    """``S(E(|psi><psi|))`` in bits. ``psi`` need not be normalized."""
    return float(von_neumann(_outputs(channel.kraus, np.asarray(psi, dtype=complex))))


def output_entropies(channel, psis: np.ndarray) -> np.ndarray:
    return von_neumann(_outputs(channel.kraus, psis))


def output_entropy_gradient(channel, psi: np.ndarray) -> np.ndarray:
    """Euclidean gradient of ``psi -> S(E(|psi><psi|))``.

    Returned as a complex vector ``g`` whose real and imaginary parts are
    the partial derivatives with respect to ``Re psi`` and ``Im psi``.
    With ``G = -(log2 rho + I/ln 2)`` and ``rho = E(|psi><psi|)`` we have
    ``dS = 2 Re <E^*(G) psi, dpsi>``, so ``g = 2 E^*(G) psi``.
    """
    return _value_and_gradient(channel.kraus, np.asarray(psi, dtype=complex))[1]


def _value_and_gradient(kraus: np.ndarray, psi: np.ndarray) -> tuple[float, np.ndarray]:
    m = kraus @ psi  # (k, out)
    rho = m.T @ np.conj(m)
    w, v = np.linalg.eigh(rho)
    w = np.clip(w, _EIG_FLOOR, None)
    value = float(-np.sum(np.where(w > 1e-300, w * np.log2(w), 0.0)))
    g_eigs = -(np.log2(w) + 1.0 / LN2)
    g_mat = (v * g_eigs) @ v.conj().T
    h = np.einsum("kji,jl,kl->i", np.conj(kraus), g_mat, m)
    return max(value, 0.0), 2.0 * h


def _descend(kraus: np.ndarray, psi: np.ndarray, max_iter: int, gtol: float):
    psi = psi / np.linalg.norm(psi)
    f, g = _value_and_gradient(kraus, psi)
    step = 1.0
    rg_norm = np.inf
    converged = False
    for _ in range(max_iter):
        rg = g - np.real(np.vdot(psi, g)) * psi
        rg_norm = float(np.linalg.norm(rg))
        if rg_norm < gtol:
            converged = True
            break
        t = min(step * 2.0, 1e3)
        while True:
            cand = psi - t * rg
            cand /= np.linalg.norm(cand)
            f_new, g_new = _value_and_gradient(kraus, cand)
            if f_new <= f - ARMIJO_C * t * rg_norm**2:
                break
            t *= 0.5
            if t < 1e-18:
                break
        if t < 1e-18:
            # no descent step exists at double precision
            break
        step = t
        psi, f, g = cand, f_new, g_new
    else:
        rg = g - np.real(np.vdot(psi, g)) * psi
        rg_norm = float(np.linalg.norm(rg))
        converged = rg_norm < gtol
    return f, psi, converged, rg_norm


def min_output_entropy(
    channel,
    starts: int = DEFAULT_STARTS,
    seed: SeedLike = 0,
    *,
    initial: list[np.ndarray] | None = None,
    max_iter: int = MAX_ITER,
    gtol: float = GRAD_TOL,
    threads: int = 1,
) -> MinEntResult:
    """Best local minimum of the output entropy over pure inputs.

    ``starts`` Haar-random starting points are drawn from ``seed``; any
    vectors in ``initial`` are used as extra starting points. The count of
    starts that met the gradient tolerance is reported, never hidden.
    """
    if starts < 1:
        raise ValueError("starts must be at least 1")
    kraus = np.asarray(channel.kraus)
    points = list(haar_states(channel.input_dim, starts, as_generator(seed)))
    points += [np.asarray(p, dtype=complex) for p in (initial or [])]

    def run(p):
        return _descend(kraus, p, max_iter, gtol)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            runs = list(pool.map(run, points))
    else:
        runs = [run(p) for p in points]

    best = min(range(len(runs)), key=lambda i: (runs[i][0], i))
    _, psi, _, gnorm = runs[best]
    return MinEntResult(
        value=output_entropy(channel, psi),
        argmin=psi,
        starts=len(points),
        converged_starts=sum(bool(r[2]) for r in runs),
        best_gradient_norm=gnorm,
    )


def _pattern_search(kraus, psi, h0=0.05, h_min=1e-7):
    psi = psi / np.linalg.norm(psi)
    f = float(von_neumann(_outputs(kraus, psi)))
    n = psi.shape[0]
    directions = np.concatenate([np.eye(n), 1j * np.eye(n)]).astype(complex)
    h = h0
    while h >= h_min:
        improved = True
        while improved:
            improved = False
            for d in directions:
                for sgn in (1.0, -1.0):
                    cand = psi + sgn * h * d
                    cand /= np.linalg.norm(cand)
                    fc = float(von_neumann(_outputs(kraus, cand)))
                    if fc < f:
                        psi, f, improved = cand, fc, True
        h *= 0.5
    return f, psi


def brute_force_min_entropy(channel, grid_points: int = 10_000, seed: SeedLike = 0, polish: int = 10) -> float:
    """Upper estimate of ``S_min`` by dense sampling plus local polish.

    ``grid_points`` Haar inputs are evaluated; the best ``polish`` of them
    are refined by a coordinate pattern search over real and imaginary
    parts. With ``polish=0`` the result is a running minimum over a nested
    sample and so never increases with ``grid_points``.
    """
    if channel.input_dim > ORACLE_MAX_DIM:
        raise ValueError(f"oracle limited to input dimension <= {ORACLE_MAX_DIM}")
    kraus = np.asarray(channel.kraus)
    psis = haar_states(channel.input_dim, grid_points, as_generator(seed))
    ents = np.concatenate([output_entropies(channel, chunk) for chunk in np.array_split(psis, max(1, grid_points // 4096))])
    best = float(np.min(ents))
    for i in np.argsort(ents, kind="stable")[:polish]:
        best = min(best, _pattern_search(kraus, psis[i])[0])
    return best
