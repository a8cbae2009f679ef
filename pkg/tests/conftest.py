import numpy as np
import pytest

from opfidelity.states import random_density

ACCEPTANCE_LINES: list[str] = []


def rand_complex(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def diag_pair():
    """rho = I/2, sigma = |0><0|; fidelity 1/sqrt(2)."""
    rho = np.diag([0.5, 0.5]).astype(complex)
    sigma = np.diag([1.0, 0.0]).astype(complex)
    return rho, sigma


def random_pairs(n, dims=(2, 3, 4), seed=0):
    """Seeded (rho, sigma) pairs cycling through dims and ranks."""
    out = []
    for i in range(n):
        d = dims[i % len(dims)]
        r1 = 1 + (i // len(dims)) % d
        r2 = 1 + (i // (len(dims) * d)) % d
        out.append((random_density(d, r1, seed + 2 * i), random_density(d, r2, seed + 2 * i + 1)))
    return out


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
