"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` arrays. Bipartite spaces use the ordering
``A ⊗ B`` with composite index ``i_a * dim_b + i_b`` (``np.kron`` order).
"""

from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
NORM_TOL = 1e-12

NORM_KINDS = ("operator", "frobenius", "trace")


class DimensionError(ValueError):
    """Raised when array shapes do not match the declared subsystem dims."""


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def check_density(rho: np.ndarray, dim: int | None = None) -> np.ndarray:
    """Validate ``rho`` as a density matrix and return it as a complex array.

    Checks Hermiticity (1e-10), unit trace (1e-10) and that the smallest
    eigenvalue is at least -1e-9.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"density matrix must be square, got shape {rho.shape}")
    if dim is not None and rho.shape[0] != dim:
        raise DimensionError(f"expected dimension {dim}, got {rho.shape[0]}")
    if not is_hermitian(rho):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > TRACE_TOL:
        raise ValueError(f"density matrix has trace {np.trace(rho).real!r}")
    if np.linalg.eigvalsh(rho)[0] < -PSD_TOL:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def check_pure(psi: np.ndarray, dim: int | None = None) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise DimensionError(f"pure state must be a vector, got shape {psi.shape}")
    if dim is not None and psi.shape[0] != dim:
        raise DimensionError(f"expected dimension {dim}, got {psi.shape[0]}")
    if abs(np.linalg.norm(psi) - 1.0) > NORM_TOL:
        raise ValueError("pure state is not normalized")
    return psi


def projector(psi: np.ndarray) -> np.ndarray:
    """|psi><psi|; works on a stack of vectors along the last axis."""
    psi = np.asarray(psi)
    return psi[..., :, None] * np.conj(psi[..., None, :])


def maximally_mixed(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex) / dim


def max_entangled(dim: int) -> np.ndarray:
    """The vector dim^{-1/2} sum_i |i>|i> on C^dim ⊗ C^dim."""
    return np.eye(dim, dtype=complex).reshape(-1) / np.sqrt(dim)


def basis_state(dim: int, index: int) -> np.ndarray:
    e = np.zeros(dim, dtype=complex)
    e[index] = 1.0
    return e


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def partial_trace(rho: np.ndarray, dim_a: int, dim_b: int, keep: str = "A") -> np.ndarray:
    """Trace out one factor of a state on ``A ⊗ B``.

    ``keep`` is ``"A"`` or ``"B"``. A leading stack axis is allowed, so
    ``rho`` may have shape ``(..., dA*dB, dA*dB)``.
    """
    rho = np.asarray(rho)
    n = dim_a * dim_b
    if rho.shape[-2:] != (n, n):
        raise DimensionError(f"state of shape {rho.shape[-2:]} is not on {dim_a}x{dim_b}")
    t = rho.reshape(rho.shape[:-2] + (dim_a, dim_b, dim_a, dim_b))
    if keep == "A":
        return np.einsum("...ibjb->...ij", t)
    if keep == "B":
        return np.einsum("...aiaj->...ij", t)
    raise ValueError(f"keep must be 'A' or 'B', not {keep!r}")


def reduced_from_vector(psi: np.ndarray, dim_a: int, dim_b: int, keep: str = "B") -> np.ndarray:
    """Reduced state of a bipartite vector without forming |psi><psi|.

    Accepts a stack ``(..., dA*dB)``.
    """
    psi = np.asarray(psi)
    if psi.shape[-1] != dim_a * dim_b:
        raise DimensionError(f"vector of length {psi.shape[-1]} is not on {dim_a}x{dim_b}")
    m = psi.reshape(psi.shape[:-1] + (dim_a, dim_b))
    if keep == "B":
        return np.einsum("...ab,...ac->...bc", m, np.conj(m))
    if keep == "A":
        return np.einsum("...ab,...cb->...ac", m, np.conj(m))
    raise ValueError(f"keep must be 'A' or 'B', not {keep!r}")


def eigh(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    h = np.asarray(h)
    if not is_hermitian(h):
        raise ValueError("eigh requires a Hermitian matrix")
    return np.linalg.eigh(h)


def clamped_eigvalsh(rho: np.ndarray) -> np.ndarray:
    """Eigenvalues with roundoff negatives in [-1e-9, 0) set to zero.

    Supports stacks.
    """
    w = np.linalg.eigvalsh(rho)
    return np.where((w < 0) & (w >= -PSD_TOL), 0.0, w)


def norm(m: np.ndarray, kind: str = "operator") -> float:
    """Schatten norms: ``operator`` (inf), ``frobenius`` (2), ``trace`` (1).

    Operator and trace norms go through singular values, so ``m`` need not
    be Hermitian or square. Stacks return an array of norms.
    """
    m = np.asarray(m)
    if kind == "frobenius":
        return np.sqrt(np.sum(np.abs(m) ** 2, axis=(-2, -1)))
    if kind not in NORM_KINDS:
        raise ValueError(f"unknown norm kind {kind!r}; expected one of {NORM_KINDS}")
    sv = np.linalg.svd(m, compute_uv=False)
    return sv[..., 0] if kind == "operator" else np.sum(sv, axis=-1)


def hermitian_operator_norm(m: np.ndarray) -> np.ndarray:
    """Operator norm of Hermitian matrices via eigenvalues (faster than SVD)."""
    w = np.linalg.eigvalsh(m)
    return np.maximum(np.abs(w[..., 0]), np.abs(w[..., -1]))


def sqrtm_psd(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(rho)
    w = np.sqrt(np.clip(w, 0.0, None))
    return (v * w) @ v.conj().T


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Root fidelity ``|| sqrt(rho) sqrt(sigma) ||_1``."""
    rho = check_density(rho)
    sigma = check_density(sigma, rho.shape[0])
    f = float(norm(sqrtm_psd(rho) @ sqrtm_psd(sigma), "trace"))
    return min(max(f, 0.0), 1.0)


def swap_operator(d: int) -> np.ndarray:
    """The operator mapping |i>|j> to |j>|i> on C^d ⊗ C^d."""
    if d < 1:
        raise ValueError("swap dimension must be positive")
    f = np.zeros((d, d, d, d))
    i, j = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    f[j, i, i, j] = 1.0
    return f.reshape(d * d, d * d).astype(complex)
