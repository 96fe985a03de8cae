import numpy as np
import pytest
from hypothesis import settings

from moelab.haar import SeedSpec, complex_gaussian

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def random_density(dim, rng, rank=None):
    g = complex_gaussian(rng, (dim, rank or dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def partial_trace_loops(rho, da, db, keep):
    """Slow reference partial trace written with explicit index loops."""
    r = rho.reshape(da, db, da, db)
    if keep == "A":
        out = np.zeros((da, da), dtype=complex)
        for i in range(da):
            for j in range(da):
                out[i, j] = sum(r[i, k, j, k] for k in range(db))
    else:
        out = np.zeros((db, db), dtype=complex)
        for i in range(db):
            for j in range(db):
                out[i, j] = sum(r[k, i, k, j] for k in range(da))
    return out


@pytest.fixture
def rng():
    return SeedSpec(12345).generator()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
