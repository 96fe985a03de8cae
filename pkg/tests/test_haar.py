import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from moelab.haar import (
    SeedSpec,
    as_generator,
    decompose_against,
    haar_isometries,
    haar_state,
    haar_state_orthogonal,
    haar_states,
    haar_states_orthogonal,
    haar_unitary,
)
from moelab.linalg import DimensionError, basis_state

seeds = st.integers(0, 2**63 - 1)


def test_seedspec_reproducible_and_distinct():
    a = haar_states(5, 10, SeedSpec(7, 3))
    b = haar_states(5, 10, SeedSpec(7, 3))
    c = haar_states(5, 10, SeedSpec(7, 4))
    d = haar_states(5, 10, SeedSpec(8, 3))
    assert np.array_equal(a, b)
    assert not np.allclose(a, c) and not np.allclose(a, d)
    assert SeedSpec(1).child(2, 3) == SeedSpec(1, 0, (2, 3))
    with pytest.raises(TypeError):
        SeedSpec(1.5)


def test_generator_passthrough_advances():
    g = SeedSpec(1).generator()
    assert as_generator(g) is g
    assert not np.array_equal(haar_state(3, g), haar_state(3, g))


def test_nested_samples():
    small = haar_states(4, 10, SeedSpec(3))
    big = haar_states(4, 100, SeedSpec(3))
    np.testing.assert_array_equal(small, big[:10])


def test_state_examples():
    assert abs(abs(haar_state(1, SeedSpec(0))[0]) - 1) <= 1e-12
    x = np.abs(haar_states(4, 100_000, SeedSpec(1))[:, 0]) ** 2
    se = x.std(ddof=1) / np.sqrt(x.size)
    assert abs(x.mean() - 0.25) <= 3 * se


def test_unitary_moments():
    g = SeedSpec(2).generator()
    u00 = np.array([haar_unitary(3, g)[0, 0] for _ in range(100_000)])
    for part in (u00.real, u00.imag):
        assert abs(part.mean()) <= 3 * part.std(ddof=1) / np.sqrt(part.size)
    p = np.abs(u00) ** 2
    assert abs(p.mean() - 1 / 3) <= 3 * p.std(ddof=1) / np.sqrt(p.size)


def test_eigenphases_follow_circular_law():
    # for Haar U(2) the eigenphase gap has density (1 - cos t) / (2 pi) on [0, 2 pi)
    g = SeedSpec(3).generator()
    gaps = []
    for _ in range(5000):
        a, b = np.angle(np.linalg.eigvals(haar_unitary(2, g)))
        gaps.append((a - b) % (2 * np.pi))
    cdf = lambda t: (t - np.sin(t)) / (2 * np.pi)
    assert stats.kstest(gaps, cdf).pvalue > 0.01


@given(seeds, st.integers(1, 8))
def test_unitarity(seed, d):
    u = haar_unitary(d, SeedSpec(seed))
    assert np.max(np.abs(u.conj().T @ u - np.eye(d))) <= 1e-10


@given(seeds, st.integers(1, 8), st.integers(1, 20))
def test_states_are_unit(seed, d, n):
    assert np.max(np.abs(np.linalg.norm(haar_states(d, n, SeedSpec(seed)), axis=1) - 1)) <= 1e-12


def test_isometries():
    v = haar_isometries(6, 3, 5, SeedSpec(4))
    assert v.shape == (5, 6, 3)
    assert np.max(np.abs(np.einsum("nji,njk->nik", v.conj(), v) - np.eye(3))) <= 1e-12
    with pytest.raises(ValueError):
        haar_isometries(2, 3, 1, SeedSpec(0))


def test_decompose_examples():
    psi = haar_state(4, SeedSpec(5))
    x, phi = decompose_against(psi, psi)
    assert x == pytest.approx(1.0)
    assert abs(np.vdot(psi, phi)) <= 1e-10
    chi = haar_state_orthogonal(psi, SeedSpec(6))
    x, phi = decompose_against(chi, psi)
    assert x == pytest.approx(0.0, abs=1e-20)
    assert abs(abs(np.vdot(phi, chi)) - 1) <= 1e-12
    with pytest.raises(DimensionError):
        decompose_against(np.array([1.0 + 0j]), np.array([1j]))


@given(seeds, st.integers(2, 6))
def test_decompose_reassembles(seed, d):
    g = SeedSpec(seed).generator()
    psi, chi = haar_state(d, g), haar_state(d, g)
    x, phi = decompose_against(chi, psi)
    overlap = np.vdot(psi, chi)
    aligned = chi * np.conj(overlap) / abs(overlap)
    assert 0 <= x <= 1
    np.testing.assert_allclose(np.sqrt(x) * psi + np.sqrt(1 - x) * phi, aligned, atol=1e-10)
    assert abs(np.vdot(psi, phi)) <= 1e-10


def test_overlap_law_ks():
    n = 5
    psi = haar_state(n, SeedSpec(0))
    chis = haar_states(n, 10_000, SeedSpec(1))
    xs = [decompose_against(c, psi)[0] for c in chis]
    assert stats.kstest(xs, stats.beta(1, n - 1).cdf).pvalue > 0.01


@given(seeds, st.integers(2, 7))
def test_orthogonal_sampler(seed, d):
    g = SeedSpec(seed).generator()
    psi = haar_state(d, g)
    phis = haar_states_orthogonal(psi, 20, g)
    assert np.max(np.abs(phis @ np.conj(psi))) <= 1e-10
    assert np.max(np.abs(np.linalg.norm(phis, axis=1) - 1)) <= 1e-12


def test_orthogonal_sampler_rejects_dim_one():
    with pytest.raises(DimensionError):
        haar_state_orthogonal(np.array([1.0 + 0j]), SeedSpec(0))


def test_orthogonal_sampler_invariant_under_stabilizer():
    d = 5
    g = SeedSpec(9).generator()
    psi = basis_state(d, 0).astype(complex)
    w = np.eye(d, dtype=complex)
    w[1:, 1:] = haar_unitary(d - 1, g)  # V psi = psi
    theta = haar_state_orthogonal(psi, g)
    phis = haar_states_orthogonal(psi, 5000, g)
    other = haar_states_orthogonal(psi, 5000, g) @ w.T
    s1, s2 = np.abs(phis @ np.conj(theta)) ** 2, np.abs(other @ np.conj(theta)) ** 2
    assert stats.ks_2samp(s1, s2).pvalue > 0.01


def test_unitary_invariance_of_states():
    g = SeedSpec(10).generator()
    v = haar_unitary(4, g)
    a = np.abs(haar_states(4, 5000, g)[:, 0])
    b = np.abs((haar_states(4, 5000, g) @ v.T)[:, 0])
    assert stats.ks_2samp(a, b).pvalue > 0.01
