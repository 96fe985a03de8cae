"""Random channels in Stinespring form.

A channel from ``A`` to ``B`` is built from a unitary ``U`` on ``A ⊗ B``::

    E(rho) = tr_A( U (rho ⊗ |0><0|_B) U^† )

so the input and environment dimensions are both ``|A|`` and the output
dimension is ``|B|``. Only the columns of ``U`` with ancilla index 0
matter; they form the isometry ``V: A -> A ⊗ B`` stored on the channel
as a ``(|A|, |B|, |A|)`` tensor ``V[a, b, i] = <a, b| U |i, 0>``.

The three variants share the same isometry:

* ``direct``: trace out ``A``.
* ``conjugate``: same with ``U`` replaced by its entrywise conjugate.
* ``complementary``: trace out ``B`` instead (output on ``A``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import DimensionError, swap_operator
from .resources import guard

UNITARY_TOL = 1e-10
VARIANTS = ("direct", "conjugate", "complementary")


@dataclass(frozen=True, eq=False)
class StinespringChannel:
    isometry: np.ndarray = field(repr=False)
    dim_a: int
    dim_b: int
    variant: str = "direct"
    unitary: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.isometry.shape != (self.dim_a, self.dim_b, self.dim_a):
            raise DimensionError("isometry tensor does not match (dim_a, dim_b, dim_a)")

    @property
    def input_dim(self) -> int:
        return self.dim_a

    @property
    def output_dim(self) -> int:
        return self.dim_a if self.variant == "complementary" else self.dim_b

    @property
    def kraus(self) -> np.ndarray:
        """Kraus operators as a stack ``(k, out, in)`` for this variant."""
        v = self.isometry
        if self.variant == "direct":
            return v
        if self.variant == "conjugate":
            return np.conj(v)
        return np.transpose(v, (1, 0, 2))

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return apply(self, rho)


def make_channel(u: np.ndarray, dim_a: int, dim_b: int) -> StinespringChannel:
    u = np.asarray(u, dtype=complex)
    n = dim_a * dim_b
    if u.shape != (n, n):
        raise DimensionError(f"unitary has shape {u.shape}, expected ({n}, {n})")
    residual = np.max(np.abs(u.conj().T @ u - np.eye(n)))
    if residual > UNITARY_TOL:
        raise ValueError(f"matrix is not unitary (residual {residual:.2e})")
    v = u.reshape(dim_a, dim_b, dim_a, dim_b)[:, :, :, 0]
    return StinespringChannel(np.ascontiguousarray(v), dim_a, dim_b, "direct", u)


def from_isometry(v: np.ndarray, dim_a: int, dim_b: int) -> StinespringChannel:
    """Direct channel from an ``(|A||B|, |A|)`` isometry.

    Haar isometries have the law of the relevant columns of a Haar unitary,
    so this is the cheap route for Monte Carlo.
    """
    v = np.asarray(v, dtype=complex)
    if v.shape != (dim_a * dim_b, dim_a):
        raise DimensionError(f"isometry has shape {v.shape}")
    return StinespringChannel(np.ascontiguousarray(v.reshape(dim_a, dim_b, dim_a)), dim_a, dim_b)


def identity_unitary(dim_a: int, dim_b: int) -> np.ndarray:
    return np.eye(dim_a * dim_b, dtype=complex)


def swap_unitary(dim: int) -> np.ndarray:
    """With ``|A| == |B|`` this unitary makes ``E`` the identity channel."""
    return swap_operator(dim)


def apply(channel: StinespringChannel, rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-2:] != (channel.input_dim, channel.input_dim):
        raise DimensionError(f"input of shape {rho.shape[-2:]} for a {channel.input_dim}-dim input")
    k = channel.kraus
    return np.einsum("kij,...jl,kml->...im", k, rho, np.conj(k), optimize=True)


def apply_pure(channel: StinespringChannel, psi: np.ndarray) -> np.ndarray:
    """Channel output on ``|psi><psi|``; accepts a stack of vectors."""
    psi = np.asarray(psi)
    if psi.shape[-1] != channel.input_dim:
        raise DimensionError("input vector has the wrong dimension")
    m = np.einsum("kij,...j->...ki", channel.kraus, psi)
    return np.einsum("...ki,...kj->...ij", m, np.conj(m))


def apply_outer(channel: StinespringChannel, psi: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Channel output on the operator ``|psi><phi|``; stacks allowed."""
    k = channel.kraus
    m1 = np.einsum("kij,...j->...ki", k, psi)
    m2 = np.einsum("kij,...j->...ki", k, phi)
    return np.einsum("...ki,...kj->...ij", m1, np.conj(m2))


def adjoint(channel: StinespringChannel, g: np.ndarray) -> np.ndarray:
    """Heisenberg-picture map ``E^*(G) = sum_k K_k^† G K_k``."""
    k = channel.kraus
    return np.einsum("kji,jl,klm->im", np.conj(k), g, k, optimize=True)


def conjugate(channel: StinespringChannel) -> StinespringChannel:
    if channel.variant != "direct":
        raise ValueError("conjugate() applies to direct channels only")
    return StinespringChannel(channel.isometry, channel.dim_a, channel.dim_b, "conjugate", channel.unitary)


def complementary(channel: StinespringChannel) -> StinespringChannel:
    if channel.variant != "direct":
        raise ValueError("complementary() applies to direct channels only")
    return StinespringChannel(channel.isometry, channel.dim_a, channel.dim_b, "complementary", channel.unitary)


def kraus_of_complementary(channel: StinespringChannel, form: str = "minimal") -> np.ndarray:
    """Kraus operators of ``E^c``, one per output basis index of ``E``.

    ``A_b[i, j] = <i, b| U |j, 0>``, returned as a ``(|B|, |A|, |A|)`` stack.
    This is the minimal family. ``form="padded"`` returns ``|B|^2``
    operators indexed by the pair ``k = (b, b')`` in row-major order, with
    ``A_(b, 0) = A_b`` and zeros elsewhere; feeding that family to
    :func:`reconstruct_direct_from_kraus` gives ``E(rho) ⊗ |0><0|``.
    """
    if channel.variant != "direct":
        raise ValueError("kraus_of_complementary() expects a direct channel")
    minimal = np.transpose(channel.isometry, (1, 0, 2)).copy()
    if form == "minimal":
        return minimal
    if form != "padded":
        raise ValueError("form must be 'minimal' or 'padded'")
    b, a = channel.dim_b, channel.dim_a
    padded = np.zeros((b, b, a, a), dtype=minimal.dtype)
    padded[:, 0] = minimal
    return padded.reshape(b * b, a, a)


def reconstruct_direct_from_kraus(kraus: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Rebuild ``E(rho)`` from the complementary Kraus family.

    Uses ``E(rho)_{k k'} = tr(A_{k'}^† A_k rho)``.
    """
    kraus = np.asarray(kraus)
    if kraus.ndim != 3 or kraus.shape[1] != kraus.shape[2]:
        raise DimensionError("expected a stack of square Kraus operators")
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != kraus.shape[1:]:
        raise DimensionError("input does not match the Kraus operator dimension")
    return np.einsum("kai,ij,maj->km", kraus, rho, np.conj(kraus), optimize=True)


def apply_product(channel: StinespringChannel, rho: np.ndarray) -> np.ndarray:
    """``(E ⊗ Ē)(rho)`` for ``rho`` on ``A ⊗ A'``, output on ``B ⊗ B'``.

    The factors are contracted by index directly; ``U ⊗ U^*`` is never
    materialized.
    """
    if channel.variant != "direct":
        raise ValueError("apply_product() expects a direct channel")
    a, b = channel.dim_a, channel.dim_b
    guard("product channel E ⊗ Ē", (a * b) ** 2)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (a * a, a * a):
        raise DimensionError(f"input must be {a * a}x{a * a}, got {rho.shape}")
    v = channel.isometry
    r = rho.reshape(a, a, a, a)
    out = np.einsum(
        "xbi,ydk,ikjl,xcj,yel->bdce",
        v, np.conj(v), r, np.conj(v), v,
        optimize=True,
    )
    return out.reshape(b * b, b * b)


def product_kraus(channel: StinespringChannel) -> np.ndarray:
    """Kraus stack of ``E ⊗ Ē``, shape ``(|A|^2, |B|^2, |A|^2)``."""
    if channel.variant != "direct":
        raise ValueError("product_kraus() expects a direct channel")
    a, b = channel.dim_a, channel.dim_b
    guard("product channel E ⊗ Ē", (a * b) ** 2)
    k = channel.isometry
    kk = np.einsum("xbi,ydj->xybdij", k, np.conj(k))
    return kk.reshape(a * a, b * b, a * a)


def product_channel(channel: StinespringChannel) -> "KrausChannel":
    return KrausChannel(product_kraus(channel))


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A channel given only by a Kraus stack ``(k, out, in)``.

    Used for ``E ⊗ Ē`` in the entropy optimizer, which only needs
    ``kraus``, ``input_dim`` and ``output_dim``.
    """

    kraus: np.ndarray = field(repr=False)

    @property
    def input_dim(self) -> int:
        return self.kraus.shape[2]

    @property
    def output_dim(self) -> int:
        return self.kraus.shape[1]

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        k = self.kraus
        return np.einsum("kij,...jl,kml->...im", k, rho, np.conj(k), optimize=True)
