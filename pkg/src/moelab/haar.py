"""Seeded Haar-measure sampling.

Every random draw in the package is routed through a :class:`SeedSpec`, a
``(master_seed, stream_id)`` pair plus an optional path of child keys. The
pair maps onto ``numpy.random.SeedSequence(master_seed, spawn_key=...)``, so
distinct specs give independent streams and equal specs reproduce draws
bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .linalg import DimensionError, check_pure

ORTHO_RESAMPLE_TOL = 1e-8
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int = 0
    stream_id: int = 0
    path: tuple[int, ...] = ()

    def __post_init__(self):
        for v in (self.master_seed, self.stream_id, *self.path):
            if not isinstance(v, (int, np.integer)):
                raise TypeError(f"seed components must be integers, got {v!r}")

    def child(self, *keys: int) -> "SeedSpec":
        return SeedSpec(self.master_seed, self.stream_id, self.path + tuple(int(k) for k in keys))

    def seed_sequence(self) -> np.random.SeedSequence:
        key = tuple(int(k) & _MASK64 for k in (self.stream_id, *self.path))
        return np.random.SeedSequence(int(self.master_seed) & _MASK64, spawn_key=key)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed_sequence()))


SeedLike = Union[SeedSpec, np.random.Generator, int, None]


def as_generator(seed: SeedLike) -> np.random.Generator:
    """Coerce a seed-like value to a Generator.

    Generators pass through untouched (draws advance the caller's stream);
    a SeedSpec or int builds a fresh generator, so repeated calls repeat.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, SeedSpec):
        return seed.generator()
    if seed is None:
        return np.random.default_rng()
    return SeedSpec(int(seed)).generator()


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """i.i.d. standard complex normals, E|z|^2 = 1.

    Real and imaginary parts are interleaved so that growing the leading
    axis keeps earlier rows unchanged (nested samples).
    """
    shape = (shape,) if np.isscalar(shape) else tuple(shape)
    z = rng.standard_normal(shape + (2,))
    return (z[..., 0] + 1j * z[..., 1]) / np.sqrt(2.0)


def haar_states(dim: int, size: int, seed: SeedLike) -> np.ndarray:
    """``size`` Haar-random unit vectors in C^dim, shape ``(size, dim)``."""
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    rng = as_generator(seed)
    z = complex_gaussian(rng, (size, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_state(dim: int, seed: SeedLike) -> np.ndarray:
    return haar_states(dim, 1, seed)[0]


def _qr_haar(z: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    phases = d / np.abs(d)
    return q * phases[..., None, :]


def haar_unitary(dim: int, seed: SeedLike) -> np.ndarray:
    """Haar unitary from the QR decomposition of a Ginibre matrix.

    Column ``j`` of Q is multiplied by ``R_jj / |R_jj|`` so that the law is
    exactly Haar rather than biased by the QR sign convention.
    """
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    rng = as_generator(seed)
    return _qr_haar(complex_gaussian(rng, (dim, dim)))


def haar_isometries(rows: int, cols: int, size: int, seed: SeedLike) -> np.ndarray:
    """Stack of Haar isometries, shape ``(size, rows, cols)``.

    Equal in law to the first ``cols`` columns of a Haar unitary on C^rows.
    """
    if cols > rows:
        raise ValueError("an isometry needs cols <= rows")
    rng = as_generator(seed)
    return _qr_haar(complex_gaussian(rng, (size, rows, cols)))


def decompose_against(chi: np.ndarray, psi: np.ndarray) -> tuple[float, np.ndarray]:
    """Split ``chi`` as ``sqrt(x) psi + sqrt(1-x) phi`` with ``phi ⟂ psi``.

    The global phase of ``chi`` is first chosen so that ``<psi|chi> >= 0``.
    When ``chi`` is parallel to ``psi`` (x == 1) a fixed unit vector
    orthogonal to ``psi`` is returned for ``phi``.
    """
    chi = check_pure(chi)
    psi = check_pure(psi, chi.shape[0])
    overlap = np.vdot(psi, chi)
    x = min(float(abs(overlap) ** 2), 1.0)
    if abs(overlap) > 0:
        chi = chi * (np.conj(overlap) / abs(overlap))
    rest = chi - np.vdot(psi, chi) * psi
    r = np.linalg.norm(rest)
    if r > ORTHO_RESAMPLE_TOL:
        return x, rest / r
    if chi.shape[0] < 2:
        raise DimensionError("no orthogonal complement in dimension 1")
    return 1.0, _fixed_orthogonal(psi)


def _fixed_orthogonal(psi: np.ndarray) -> np.ndarray:
    # first basis vector with nonvanishing orthogonal part
    for k in np.argsort(np.abs(psi)):
        e = np.zeros_like(psi)
        e[k] = 1.0
        v = e - np.vdot(psi, e) * psi
        nv = np.linalg.norm(v)
        if nv > 1e-6:
            return v / nv
    raise DimensionError("no orthogonal complement")


def project_out(psi: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Remove the ``psi`` component from each row of ``vectors``."""
    return vectors - np.outer(vectors @ np.conj(psi), psi)


def haar_states_orthogonal(psi: np.ndarray, size: int, seed: SeedLike) -> np.ndarray:
    """Haar-random unit vectors in the orthogonal complement of ``psi``."""
    psi = check_pure(psi)
    if psi.shape[0] < 2:
        raise DimensionError("orthogonal complement needs dim >= 2")
    rng = as_generator(seed)
    out = np.empty((size, psi.shape[0]), dtype=complex)
    todo = np.arange(size)
    while todo.size:
        v = project_out(psi, complex_gaussian(rng, (todo.size, psi.shape[0])))
        n = np.linalg.norm(v, axis=1)
        ok = n >= ORTHO_RESAMPLE_TOL
        out[todo[ok]] = v[ok] / n[ok, None]
        todo = todo[~ok]
    return out


def haar_state_orthogonal(psi: np.ndarray, seed: SeedLike) -> np.ndarray:
    return haar_states_orthogonal(psi, 1, seed)[0]
