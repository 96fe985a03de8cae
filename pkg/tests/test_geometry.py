import numpy as np
import pytest
from hypothesis import given, strategies as st

from moelab.geometry import (
    C0,
    SetParams,
    TubeSpec,
    g_function,
    golden_section,
    in_tube,
    in_X_witnessed,
    in_Y,
    lipschitz_pair_check,
    pinch,
    tube_distance,
    tube_width,
)
from moelab.haar import SeedSpec, complex_gaussian, haar_state, haar_states, haar_unitary
from moelab.linalg import DimensionError, basis_state, max_entangled, maximally_mixed, norm, projector

from conftest import random_density

seeds = st.integers(0, 2**63 - 1)


def test_tube_width_base_two():
    assert tube_width(16) == pytest.approx(np.sqrt(4 / 16))
    assert tube_width(1) == 0.0
    assert TubeSpec(np.eye(2) / 2, 64).width == pytest.approx(np.sqrt(6 / 64))
    with pytest.raises(ValueError):
        tube_width(0)


def test_in_tube_examples(rng):
    sigma = random_density(3, rng)
    m = in_tube(sigma, TubeSpec(sigma, 16))
    assert m.member and m.best_p == pytest.approx(1.0) and m.best_dist == pytest.approx(0, abs=1e-12)
    assert in_tube(maximally_mixed(3), TubeSpec(maximally_mixed(3), 1000)).member
    pure = projector(basis_state(2, 0))
    n = 1024  # width sqrt(10/1024) < 1/4
    m = in_tube(np.eye(2) / 2, TubeSpec(pure, n))
    assert not m.member
    assert m.best_p == pytest.approx(0.5, abs=1e-6)
    assert m.best_dist == pytest.approx(0.25, abs=1e-6)


def test_in_tube_dimension_mismatch():
    with pytest.raises(DimensionError):
        in_tube(np.eye(2) / 2, TubeSpec(np.eye(3) / 3, 8))


@given(seeds, st.integers(2, 5))
def test_golden_section_beats_grid(seed, d):
    g = SeedSpec(seed).generator()
    pi, sigma = random_density(d, g), random_density(d, g)
    p, best = golden_section(lambda p: tube_distance(pi, sigma, p), 0.5, 1.0)
    grid = [tube_distance(pi, sigma, p) for p in np.linspace(0.5, 1.0, 100)]
    assert min(grid) >= best - 1e-6
    assert 0.5 <= p <= 1.0


@given(seeds, st.integers(2, 4), st.integers(3, 200), st.integers(0, 200))
def test_tube_nesting(seed, d, n, extra):
    g = SeedSpec(seed).generator()
    sigma = random_density(d, g)
    pi = 0.8 * sigma + 0.2 * random_density(d, g)
    if in_tube(pi, TubeSpec(sigma, n + extra)).member:
        assert in_tube(pi, TubeSpec(sigma, n)).member


def test_in_Y_examples():
    assert in_Y(maximally_mixed(4), SetParams(4, 16, 1.0, 1.01))
    assert not in_Y(projector(basis_state(3, 0)), SetParams(3, 16, 1.0, 2.9))
    assert in_Y(np.diag([0.6, 0.4]), SetParams(2, 16, 1.0, 1.3))
    with pytest.raises(DimensionError):
        in_Y(np.eye(3) / 3, SetParams(2, 16, 1.0, 2.0))


@given(seeds, st.integers(2, 5), st.floats(1.01, 5), st.floats(0, 3))
def test_Y_monotone_in_a(seed, d, a, extra):
    rho = random_density(d, SeedSpec(seed).generator())
    if in_Y(rho, SetParams(d, 16, 1.0, a)):
        assert in_Y(rho, SetParams(d, 16, 1.0, a + extra))


def test_set_params_validation():
    with pytest.raises(ValueError):
        SetParams(2, 16, 0.0, 2.0)
    with pytest.raises(ValueError):
        SetParams(2, 16, 1.0, 1.0)
    assert SetParams(4, 16, 8.0, 2.0).x_has_witnesses
    assert not SetParams(4, 16, 8.5, 2.0).x_has_witnesses
    assert C0 == 1333.0


def test_in_X_examples():
    d = 4
    pure = projector(haar_state(d, SeedSpec(0)))
    params = SetParams(d, 16, d * np.log2(d), 2.0)
    res = in_X_witnessed(pure, params, [pure])
    assert res.member and res.witness_index == 0 and res.status == "member"
    res = in_X_witnessed(pure, SetParams(d, 16, 0.1, 2.0), [maximally_mixed(d)])
    assert not res.member and res.status == "no_match"
    res = in_X_witnessed(pure, params, [])
    assert not res.member and res.status == "no_witnesses"
    # second witness qualifies, first does not
    res = in_X_witnessed(pure, params, [maximally_mixed(d), pure])
    assert res.witness_index == 1


def test_pinch_examples(rng):
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    comp = [projector(basis_state(2, i)) for i in range(2)]
    np.testing.assert_array_equal(pinch(x, comp), np.zeros((2, 2)))
    g = complex_gaussian(rng, (4, 4))
    h = g + g.conj().T
    w, v = np.linalg.eigh(h)
    eig = [np.outer(v[:, i], v[:, i].conj()) for i in range(4)]
    p = pinch(h, eig)
    np.testing.assert_allclose(p, h, atol=1e-12)
    for kind in ("frobenius", "operator"):
        assert norm(p, kind) == pytest.approx(norm(h, kind))


def test_pinch_rejects_bad_families():
    with pytest.raises(ValueError):
        pinch(np.eye(2), [projector(basis_state(2, 0))])
    with pytest.raises(ValueError):
        pinch(np.eye(2), [np.eye(2), projector(basis_state(2, 0))])
    with pytest.raises(ValueError):
        pinch(np.eye(2), [])


@given(seeds, st.integers(2, 6), st.integers(1, 6))
def test_pinch_contracts(seed, d, blocks):
    g = SeedSpec(seed).generator()
    x = complex_gaussian(g, (d, d))
    u = haar_unitary(d, g)
    cuts = np.array_split(np.arange(d), min(blocks, d))
    family = [u[:, c] @ u[:, c].conj().T for c in cuts]
    px = pinch(x, family)
    assert norm(px, "frobenius") <= norm(x, "frobenius") + 1e-10
    assert norm(px, "operator") <= norm(x, "operator") + 1e-10
    assert abs(np.trace(px) - np.trace(x)) <= 1e-10


def test_g_examples():
    assert g_function(max_entangled(3), 3, 3) == pytest.approx(0, abs=1e-12)
    psi = np.kron(haar_state(3, SeedSpec(1)), basis_state(2, 1))
    assert g_function(psi, 3, 2) == pytest.approx(np.sqrt(0.5))


@given(seeds, st.integers(1, 6), st.integers(1, 4))
def test_g_upper_bound(seed, a, b):
    psi = haar_state(a * b, SeedSpec(seed))
    assert g_function(psi, a, b) <= np.sqrt(1 - 1 / b) + 1e-12


def test_lipschitz_examples():
    phi = haar_states(32, 1, SeedSpec(3))[0]
    assert lipschitz_pair_check(phi, phi, 16, 2, 3.0) == (0.0, 0.0)
    pure_b = np.kron(haar_state(16, SeedSpec(4)), basis_state(2, 0))
    with pytest.raises(ValueError):
        lipschitz_pair_check(pure_b, phi, 16, 2, 1.5)


@given(seeds)
def test_lipschitz_on_Y_pairs(seed):
    g = SeedSpec(seed).generator()
    psi = haar_state(32, g)
    phi = psi + 10 ** g.uniform(-4, 0) * complex_gaussian(g, 32) / np.sqrt(32)
    phi /= np.linalg.norm(phi)
    lhs, rhs = lipschitz_pair_check(psi, phi, 16, 2, 3.0)
    assert lhs <= rhs + 1e-9
    assert lhs <= 2 * np.linalg.norm(psi - phi) + 1e-12
