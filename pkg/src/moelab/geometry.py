"""Tubes around states, the low-entropy set X, the bounded-norm set Y,
pinching, and the restricted Lipschitz estimate for ``g``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .entropy import entropy_deviation
from .linalg import (
    DimensionError,
    hermitian_operator_norm,
    maximally_mixed,
    norm,
    reduced_from_vector,
)

C0 = 1333.0
MEMBERSHIP_TOL = 1e-9
Y_TOL = 1e-10
P_TOL = 1e-6
PROJECTOR_TOL = 1e-10
_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


def tube_width(n: float) -> float:
    """``sqrt(log2(N) / N)``."""
    if n <= 0:
        raise ValueError("tube width parameter must be positive")
    return float(np.sqrt(max(np.log2(n), 0.0) / n))


@dataclass(frozen=True, eq=False)
class TubeSpec:
    center: np.ndarray = field(repr=False)
    width_param: float
    width: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "width", tube_width(self.width_param))


@dataclass(frozen=True)
class SetParams:
    D: int
    N: float
    c: float
    a: float

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("c must be positive")
        if self.a <= 1:
            raise ValueError("a must exceed 1")

    @property
    def x_has_witnesses(self) -> bool:
        """False when c/D exceeds log2 D, so no state can witness X."""
        return self.c / self.D <= np.log2(self.D)


class TubeMembership(NamedTuple):
    member: bool
    best_p: float
    best_dist: float


def tube_distance(pi: np.ndarray, sigma: np.ndarray, p: float) -> float:
    d = pi.shape[0]
    return float(hermitian_operator_norm(pi - p * sigma - (1.0 - p) * maximally_mixed(d)))


def golden_section(f, lo: float, hi: float, tol: float = P_TOL) -> tuple[float, float]:
    """Minimize a convex scalar function on ``[lo, hi]``."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    # the endpoints matter: the optimum often sits at p = 1/2 or p = 1
    candidates = [(f(lo), lo), (f(hi), hi), (f(0.5 * (a + b)), 0.5 * (a + b))]
    fx, x = min(candidates)
    return x, fx


def in_tube(pi: np.ndarray, tube: TubeSpec) -> TubeMembership:
    """Is ``pi`` within ``width`` of ``p sigma + (1-p) I/D`` for some p in [1/2, 1]?

    The distance is convex in ``p`` so a golden-section search finds the
    best mixing weight.
    """
    pi = np.asarray(pi, dtype=complex)
    sigma = np.asarray(tube.center, dtype=complex)
    if pi.shape != sigma.shape:
        raise DimensionError("state and tube center differ in dimension")
    p, dist = golden_section(lambda p: tube_distance(pi, sigma, p), 0.5, 1.0)
    return TubeMembership(dist <= tube.width + MEMBERSHIP_TOL, p, dist)


def in_Y(rho: np.ndarray, params: SetParams) -> bool:
    rho = np.asarray(rho)
    if rho.shape[-1] != params.D:
        raise DimensionError("state dimension does not match params.D")
    return bool(hermitian_operator_norm(rho) <= params.a / params.D + Y_TOL)


class XMembership(NamedTuple):
    member: bool
    witness_index: int | None
    status: str  # "member", "no_match" or "no_witnesses"


def in_X_witnessed(rho: np.ndarray, params: SetParams, witnesses: Sequence[np.ndarray]) -> XMembership:
    """Membership in X certified against an explicit list of candidate centers.

    A witness counts when its entropy deviation is at least ``c/D`` and
    ``rho`` lies in its tube of width parameter ``N``. Without witnesses
    nothing can be certified and the status says so.
    """
    if len(witnesses) == 0:
        return XMembership(False, None, "no_witnesses")
    threshold = params.c / params.D - MEMBERSHIP_TOL
    for i, sigma in enumerate(witnesses):
        if np.shape(sigma) != (params.D, params.D):
            raise DimensionError("witness dimension does not match params.D")
        if entropy_deviation(sigma) < threshold:
            continue
        if in_tube(rho, TubeSpec(sigma, params.N)).member:
            return XMembership(True, i, "member")
    return XMembership(False, None, "no_match")


def check_projectors(projectors: Sequence[np.ndarray], tol: float = PROJECTOR_TOL) -> None:
    ps = [np.asarray(p) for p in projectors]
    if not ps:
        raise ValueError("empty projector family")
    d = ps[0].shape[0]
    total = np.zeros((d, d), dtype=complex)
    for i, p in enumerate(ps):
        if p.shape != (d, d):
            raise DimensionError("projectors differ in dimension")
        if np.max(np.abs(p @ p - p)) > tol or np.max(np.abs(p - p.conj().T)) > tol:
            raise ValueError(f"element {i} is not an orthogonal projector")
        for q in ps[:i]:
            if np.max(np.abs(p @ q)) > tol:
                raise ValueError("projectors are not mutually orthogonal")
        total += p
    if np.max(np.abs(total - np.eye(d))) > tol:
        raise ValueError("projectors do not sum to the identity")


def pinch(x: np.ndarray, projectors: Sequence[np.ndarray]) -> np.ndarray:
    """``sum_k P_k X P_k``."""
    check_projectors(projectors)
    x = np.asarray(x)
    return sum(p @ x @ p for p in projectors)


def g_function(psi: np.ndarray, dim_a: int, dim_b: int) -> float | np.ndarray:
    """``|| psi_B - I/|B| ||_2`` for a vector (or stack) on ``A ⊗ B``."""
    rho_b = reduced_from_vector(psi, dim_a, dim_b, keep="B")
    return norm(rho_b - maximally_mixed(dim_b), "frobenius")


class LipschitzCheck(NamedTuple):
    lhs: float
    rhs: float


def lipschitz_pair_check(psi: np.ndarray, phi: np.ndarray, dim_a: int, dim_b: int, a: float) -> LipschitzCheck:
    """Both sides of ``|g(psi) - g(phi)| <= sqrt(4a/|B|) ||psi - phi||_2``.

    Only meaningful when both reductions lie in ``Y_{|B|, a}``; pairs
    outside it are rejected.
    """
    params = SetParams(dim_b, dim_a, 1.0, a)
    for name, v in (("psi", psi), ("phi", phi)):
        if not in_Y(reduced_from_vector(v, dim_a, dim_b, keep="B"), params):
            raise ValueError(f"reduction of {name} lies outside Y")
    lhs = abs(float(g_function(psi, dim_a, dim_b)) - float(g_function(phi, dim_a, dim_b)))
    rhs = float(np.sqrt(4.0 * a / dim_b) * np.linalg.norm(np.asarray(psi) - np.asarray(phi)))
    return LipschitzCheck(lhs, rhs)
