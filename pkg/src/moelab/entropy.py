"""Von Neumann entropy and the closed-form entropy/norm bounds.

All logarithms are base 2, so entropies are in bits.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .channel import StinespringChannel
from .linalg import clamped_eigvalsh, max_entangled, maximally_mixed, norm
from .resources import guard

LN2 = float(np.log(2.0))


def entropy_of_spectrum(p: np.ndarray) -> np.ndarray:
    """Shannon entropy in bits along the last axis, with 0 log 0 = 0."""
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return np.sum(terms, axis=-1)


def von_neumann(rho: np.ndarray) -> float | np.ndarray:
    """Entropy of a density matrix (or a stack of them) in bits."""
    s = entropy_of_spectrum(clamped_eigvalsh(rho))
    return np.maximum(s, 0.0) if np.ndim(s) else max(float(s), 0.0)


def entropy_deviation(rho: np.ndarray) -> float | np.ndarray:
    """``log2(d) - S(rho)``, clamped at zero."""
    d = np.shape(rho)[-1]
    dev = np.log2(d) - von_neumann(rho)
    return np.maximum(dev, 0.0) if np.ndim(dev) else max(float(dev), 0.0)


def binary_entropy(x: float) -> float:
    return float(entropy_of_spectrum(np.array([x, 1.0 - x])))


def bound_s(lam: float, dim: int) -> float:
    """Largest entropy of a ``dim``-level state whose top eigenvalue is ``>= lam``.

    ``(1 - lam) log2(dim - 1) + h(lam)``, valid for ``1/dim <= lam <= 1``;
    at ``lam = 1/dim`` it equals ``log2 dim``.
    """
    if dim < 2:
        raise ValueError("bound_s needs dim >= 2")
    if not (1.0 / dim - 1e-12 <= lam <= 1.0 + 1e-12):
        raise ValueError(f"bound_s needs 1/dim <= lambda <= 1, got {lam}")
    lam = min(max(lam, 1.0 / dim), 1.0)
    return (1.0 - lam) * np.log2(dim - 1) + binary_entropy(lam)


def bound_r(lam: float, dim: int) -> float:
    """Smallest purity ``tr(rho^2)`` given top eigenvalue ``>= lam``."""
    if dim < 2:
        raise ValueError("bound_r needs dim >= 2")
    # small slack so lam = ||rho||_inf of I/D survives roundoff
    if not (1.0 / dim - 1e-12 <= lam <= 1.0 + 1e-12):
        raise ValueError(f"bound_r needs 1/dim <= lambda <= 1, got {lam}")
    return lam**2 + (1.0 - lam) ** 2 / (dim - 1)


def two_norm_entropy_gap_bound(sigma: np.ndarray, base: str = "bits") -> tuple[float, float]:
    """Both sides of ``||sigma - I/D||_2^2 >= (log D - S(sigma)) / D``.

    The inequality rests on ``ln x <= x - 1`` and is a theorem in nats
    (``base="nats"``). In bits the right side is larger by ``1/ln 2`` and
    the inequality fails, e.g. for the spectrum ``(1/2, 1/2, 0)``.
    """
    if base not in ("bits", "nats"):
        raise ValueError("base must be 'bits' or 'nats'")
    d = sigma.shape[0]
    lhs = float(norm(sigma - maximally_mixed(d), "frobenius")) ** 2
    rhs = float(np.log2(d) - von_neumann(sigma)) / d
    return lhs, rhs * (LN2 if base == "nats" else 1.0)


def hayden_bound(dim_b: int) -> float:
    """The stated ceiling ``2 log2|B| - log2|B| / |B|`` on ``S_min(E ⊗ Ē)``."""
    return 2 * np.log2(dim_b) - np.log2(dim_b) / dim_b


class HaydenResult(NamedTuple):
    entropy: float
    bound: float
    overlap: float
    corrected_bound: float


def product_output_on_max_entangled(channel: StinespringChannel) -> np.ndarray:
    """``(E ⊗ Ē)(Φ_{AA'})`` on ``B ⊗ B'``.

    The output of the pure input is the reduction of the vector
    ``|A|^{-1/2} V V^†`` read as a state on ``(A B) ⊗ (A' B')``.
    """
    if channel.variant != "direct":
        raise ValueError("expects a direct channel")
    a, b = channel.dim_a, channel.dim_b
    guard("product channel E ⊗ Ē", (a * b) ** 2)
    v = channel.isometry.reshape(a * b, a)
    t = (v @ v.conj().T / np.sqrt(a)).reshape(a, b, a, b)
    out = np.einsum("xbyd,xcye->bdce", t, np.conj(t))
    return out.reshape(b * b, b * b)


def hayden_check(channel: StinespringChannel) -> HaydenResult:
    """Entropy of ``E ⊗ Ē`` on the maximally entangled input.

    ``overlap`` is the weight of the output on ``Φ_{BB'}``, which is at
    least ``1/|B|`` for every unitary. ``bound`` is the stated ceiling
    ``2 log2|B| - log2|B|/|B|``. ``corrected_bound`` is ``s(1/|B|, |B|^2)``,
    the ceiling that the overlap actually implies through the top-eigenvalue
    bound; it equals ``log2|B| + (1 - 1/|B|) log2(|B| + 1)`` and is strictly
    larger than ``bound`` for ``|B| >= 2``, so Haar channels routinely exceed
    ``bound`` while always respecting ``corrected_bound``.
    """
    b = channel.dim_b
    out = product_output_on_max_entangled(channel)
    phi = max_entangled(b)
    overlap = float(np.real(np.vdot(phi, out @ phi)))
    corrected = bound_s(1.0 / b, b * b) if b >= 2 else 0.0
    return HaydenResult(float(von_neumann(out)), float(hayden_bound(b)), overlap, float(corrected))
